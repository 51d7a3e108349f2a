#include "recbound/engine.hpp"

#include <algorithm>
#include <cassert>
#include <tuple>

namespace recbound {

std::string status_name(Status s) {
  switch (s) {
    case Status::ExactPostfix: return "ExactPostfix";
    case Status::WidenedPostfix: return "WidenedPostfix";
    case Status::SampledOnly: return "SampledOnly";
    case Status::Diverged: return "Diverged";
  }
  return "?";
}

int status_exit_code(Status s) {
  switch (s) {
    case Status::ExactPostfix:
    case Status::WidenedPostfix: return 0;
    case Status::SampledOnly: return 2;
    case Status::Diverged: return 3;
  }
  return 3;
}

GenSet abstract_step(const SeqEquation& eq, const BasisId& basis,
                     const GenSet& A, std::vector<std::string>* warnings) {
  GenSet out(basis);
  for (const auto& g : A.gens) {
    GenSet one = abstract_eval(*eq.rhs, basis, GenSet::singleton(g), warnings);
    out.gens.insert(out.gens.end(), one.gens.begin(), one.gens.end());
  }
  return normalize(std::move(out));
}

namespace {

XReal linf(const CoeffVec& a, const CoeffVec& b) {
  if (a.top || b.top) return a.top == b.top ? XReal(0) : XReal::infinity();
  XReal best(0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    const XReal& x = a.coeffs[i];
    const XReal& y = b.coeffs[i];
    XReal d = x >= y ? x.monus(y) : y.monus(x);
    best = xmax(best, d);
  }
  return best;
}

}  // namespace

GenSet widen(const GenSet& prev, const GenSet& next, const WideningCfg& cfg,
             WidenState* state, bool* lifted) {
  GenSet J = join(prev, next);
  std::size_t n = J.gens.size();
  long dim = J.basis.dimension();

  // Pair each joined generator with the nearest previous slot so growth is
  // tracked along a stable lane; ties resolve by generator then slot index.
  std::vector<long> slot_of(n, -1);
  {
    struct Cand {
      XReal d;
      std::size_t j, s;
    };
    std::vector<Cand> cands;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t s = 0; s < prev.gens.size(); ++s)
        cands.push_back({linf(J.gens[j], prev.gens[s]), j, s});
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.d != b.d) return a.d < b.d;
      return std::tie(a.j, a.s) < std::tie(b.j, b.s);
    });
    std::vector<bool> used_slot(prev.gens.size(), false);
    for (const auto& c : cands) {
      if (slot_of[c.j] >= 0 || used_slot[c.s]) continue;
      slot_of[c.j] = static_cast<long>(c.s);
      used_slot[c.s] = true;
    }
  }

  std::vector<std::vector<int>> st(n, std::vector<int>(dim, 0));
  for (std::size_t j = 0; j < n; ++j) {
    long s = slot_of[j];
    if (s < 0 || J.gens[j].top || prev.gens[s].top) continue;
    for (long i = 0; i < dim; ++i) {
      if (J.gens[j].coeffs[i] > prev.gens[s].coeffs[i]) {
        int base = (state && s < static_cast<long>(state->streaks.size()))
                       ? state->streaks[s][i]
                       : 0;
        st[j][i] = base + 1;
      }
    }
  }

  bool any = false;
  std::vector<Rat> ladder = cfg.thresholds;
  std::sort(ladder.begin(), ladder.end());
  for (std::size_t j = 0; j < n; ++j) {
    if (J.gens[j].top) continue;
    for (long i = 0; i < dim; ++i) {
      if (st[j][i] < cfg.delay) continue;
      const XReal& cur = J.gens[j].coeffs[i];
      XReal up = XReal::infinity();
      for (const auto& r : ladder) {
        if (XReal(r) > cur) {
          up = XReal(r);
          break;
        }
      }
      J.gens[j].coeffs[i] = up;
      st[j][i] = 0;
      any = true;
    }
    J.gens[j].normalize_top();
  }

  // Cap the antichain width by joining the closest pair until it fits.
  while (J.gens.size() > cfg.max_gens) {
    std::size_t ba = 0, bb = 1;
    XReal bd = XReal::infinity();
    for (std::size_t a = 0; a < J.gens.size(); ++a)
      for (std::size_t b = a + 1; b < J.gens.size(); ++b) {
        XReal d = linf(J.gens[a], J.gens[b]);
        if (d < bd) {
          bd = d;
          ba = a;
          bb = b;
        }
      }
    J.gens[ba] = coord_max(J.gens[ba], J.gens[bb]);
    st[ba].assign(dim, 0);
    J.gens.erase(J.gens.begin() + bb);
    st.erase(st.begin() + bb);
    any = true;
  }

  // Normalize while keeping streak counters aligned with their generators.
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < J.gens.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < J.gens.size() && !redundant; ++j) {
      if (i == j) continue;
      if (dominates(J.gens[j], J.gens[i]))
        redundant = J.gens[i] == J.gens[j] ? j < i : true;
    }
    if (!redundant) keep.push_back(i);
  }
  GenSet out(J.basis);
  std::vector<std::vector<int>> out_st;
  if (keep.empty()) {
    out.gens.push_back(CoeffVec::make_top(J.basis));
    out_st.emplace_back(dim, 0);
  } else {
    std::sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
      return J.gens[a].lex_less(J.gens[b]);
    });
    for (std::size_t i : keep) {
      out.gens.push_back(J.gens[i]);
      out_st.push_back(st[i]);
    }
  }
  if (state) state->streaks = std::move(out_st);
  if (lifted) *lifted = any;
  return out;
}

AnalysisResult analyze(const SeqEquation& eq, const BasisId& basis,
                       const WideningCfg& cfg, std::vector<long> fallback_box) {
  AnalysisResult res;
  GenSet A = GenSet::singleton(CoeffVec::zero(basis));
  WidenState st;
  st.streaks.assign(1, std::vector<int>(basis.dimension(), 0));
  res.trace.push_back(A);
  bool widened_any = false;

  for (long it = 1; it <= cfg.max_iters; ++it) {
    GenSet next = abstract_step(eq, basis, A, &res.warnings);
    res.iters = it;
    if (leq_abs(next, A)) {
      res.bound = A;
      res.status = widened_any ? Status::WidenedPostfix : Status::ExactPostfix;
      return res;
    }
    bool lifted = false;
    GenSet W = widen(A, next, cfg, &st, &lifted);
    widened_any = widened_any || lifted;
    if (cfg.early_exit) {
      for (const auto& b : W.gens) {
        GenSet B = GenSet::singleton(b);
        if (leq_abs(abstract_step(eq, basis, B, nullptr), B)) {
          res.trace.push_back(W);
          res.bound = B;
          res.status =
              widened_any ? Status::WidenedPostfix : Status::ExactPostfix;
          return res;
        }
      }
    }
    A = std::move(W);
    res.trace.push_back(A);
  }

  res.bound = A;
  if (fallback_box.empty()) fallback_box.assign(basis.arity(), 26);
  res.status = verify_postfix_sampled(eq, A, fallback_box)
                   ? Status::SampledOnly
                   : Status::Diverged;
  return res;
}

bool verify_postfix_abstract(const SeqEquation& eq, const BasisId& basis,
                             const GenSet& A) {
  return leq_abs(abstract_step(eq, basis, A, nullptr), A);
}

bool verify_postfix_exact_affine(const SeqEquation& eq, const GenSet& A) {
  assert(A.basis.kind == BasisId::Kind::affine);
  return verify_postfix_abstract(eq, A.basis, A);
}

namespace {

long pop_depth(const SeqExpr& e) {
  switch (e.kind) {
    case SeqExpr::Kind::Cst:
    case SeqExpr::Kind::N:
    case SeqExpr::Kind::F:
      return 0;
    case SeqExpr::Kind::Pop:
      return 1 + pop_depth(*e.a);
    case SeqExpr::Kind::Push:
      return pop_depth(*e.a);
    case SeqExpr::Kind::Add:
    case SeqExpr::Kind::Sub:
    case SeqExpr::Kind::Mul:
    case SeqExpr::Kind::Max:
    case SeqExpr::Kind::Comp:
      return std::max(pop_depth(*e.a), e.b ? pop_depth(*e.b) : 0);
  }
  return 0;
}

}  // namespace

bool verify_postfix_sampled(const SeqEquation& eq, const GenSet& A,
                            const std::vector<long>& extents) {
  long margin = pop_depth(*eq.rhs) + 1;
  std::vector<long> big = extents;
  for (auto& e : big) e += margin;
  PrefixTable t(eq.arity, big);
  for (const auto& p : t.points()) t.set(p, A.eval(p));
  PrefixTable s = apply_operator(eq, t, OutOfBoxPolicy::Bottom);
  for (const auto& p : t.points()) {
    bool core = true;
    for (int i = 0; i < eq.arity && core; ++i) core = p[i] < extents[i];
    if (!core) continue;
    if (!(*s.get(p) <= *t.get(p))) return false;
  }
  return true;
}

PrefixCheck verify_prefix_sampled(const SeqEquation& eq, const GenSet& A,
                                  const std::vector<long>& extents) {
  KleenePrefix kp = concrete_lfp_prefix(eq, extents);
  PrefixCheck out;
  for (const auto& p : kp.table.points()) {
    XReal oracle = *kp.table.get(p);
    XReal bound = A.eval(p);
    if (!(bound >= oracle)) {
      out.sound = false;
      ++out.violations;
      if (out.first_violation.empty()) out.first_violation = p;
    }
    if (bound != oracle) out.exact = false;
  }
  return out;
}

}  // namespace recbound

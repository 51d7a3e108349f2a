#include "recbound/galois.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace recbound {

Int FiniteFiberMap::apply(const std::vector<long>& p) const {
  Int a = 0;
  for (std::size_t j = 0; j < coef.size(); ++j) a += coef[j] * p[j];
  return a;
}

namespace {

std::string trim_ws(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// n -> 0, x/y/z/w -> 0..3, x<k> -> k; -1 when unknown
int map_axis_of(const std::string& name) {
  if (name == "n" || name == "x") return 0;
  if (name == "y") return 1;
  if (name == "z") return 2;
  if (name == "w") return 3;
  if (name.size() > 1 && name[0] == 'x') {
    for (std::size_t k = 1; k < name.size(); ++k)
      if (!std::isdigit(static_cast<unsigned char>(name[k]))) return -1;
    return std::stoi(name.substr(1));
  }
  return -1;
}

}  // namespace

std::optional<FiniteFiberMap> parse_fiber_map(const std::string& text,
                                              int arity, std::string* err) {
  auto fail = [&](const std::string& m) {
    if (err) *err = m;
    return std::nullopt;
  };
  FiniteFiberMap m;
  m.arity = arity;
  m.coef.assign(arity, Int(0));

  std::stringstream ss(text);
  std::string term;
  bool any = false;
  while (std::getline(ss, term, '+')) {
    term = trim_ws(term);
    if (term.empty()) return fail("empty term in map");
    any = true;
    Int c = 1;
    std::string name = term;
    std::size_t star = term.find('*');
    if (star != std::string::npos) {
      std::string cs = trim_ws(term.substr(0, star));
      name = trim_ws(term.substr(star + 1));
      if (cs.empty() ||
          !std::all_of(cs.begin(), cs.end(), [](unsigned char ch) {
            return std::isdigit(ch);
          }))
        return fail("bad coefficient '" + cs + "' in map");
      c = Int(cs);
    } else if (std::isdigit(static_cast<unsigned char>(term[0]))) {
      return fail("constant term '" + term + "' not allowed in map");
    }
    if (c < 1) return fail("map coefficients must be at least 1");
    int ax = map_axis_of(name);
    if (ax < 0) return fail("unknown variable '" + name + "' in map");
    if (ax >= arity)
      return fail("variable '" + name + "' is out of range for arity " +
                  std::to_string(arity));
    m.coef[ax] += c;
  }
  if (!any) return fail("empty map");
  for (int j = 0; j < arity; ++j)
    if (m.coef[j] < 1)
      return fail("axis " + std::to_string(j) +
                  " needs a positive coefficient (level sets must be finite)");
  return m;
}

long reduced_extent(const FiniteFiberMap& m,
                    const std::vector<long>& extents) {
  Int top = 0;
  for (std::size_t j = 0; j < m.coef.size(); ++j)
    top += m.coef[j] * (extents[j] - 1);
  top += 1;
  if (top > std::numeric_limits<long>::max())
    throw std::overflow_error("reduced extent does not fit a machine long");
  return top.convert_to<long>();
}

namespace {

// Every integer point of the level set sum_j coef_j x_j = a.
void walk_fiber(const std::vector<Int>& coef, std::size_t j, Int rem,
                std::vector<long>& p,
                const std::function<void(const std::vector<long>&)>& fn) {
  if (j + 1 == coef.size()) {
    if (rem % coef[j] == 0) {
      p[j] = Int(rem / coef[j]).convert_to<long>();
      fn(p);
    }
    return;
  }
  for (Int x = 0; x * coef[j] <= rem; ++x) {
    p[j] = x.convert_to<long>();
    walk_fiber(coef, j + 1, rem - x * coef[j], p, fn);
  }
}

}  // namespace

PrefixTable domain_abstract_table(const FiniteFiberMap& m,
                                  const PrefixTable& f) {
  long A = reduced_extent(m, f.extents());
  PrefixTable out(1, {A});
  std::vector<long> p(m.arity, 0);
  for (long a = 0; a < A; ++a) {
    bool exits = false, undef = false, seen = false;
    XReal sup{Rat(0)};
    walk_fiber(m.coef, 0, Int(a), p, [&](const std::vector<long>& q) {
      if (!f.in_box(q)) {
        exits = true;
        return;
      }
      auto v = f.get(q);
      if (!v) {
        undef = true;
        return;
      }
      sup = seen ? xmax(sup, *v) : *v;
      seen = true;
    });
    if (exits || undef) continue;  // left Undefined
    out.set({a}, seen ? sup : XReal(Rat(0)));
  }
  return out;
}

PrefixTable concretize_table(const FiniteFiberMap& m,
                             const PrefixTable& fsharp,
                             const std::vector<long>& extents) {
  PrefixTable g(m.arity, extents);
  for (const auto& p : g.points()) {
    XReal v{Rat(0)};
    Int a = m.apply(p);
    if (a < fsharp.extents()[0]) {
      auto c = fsharp.get({a.convert_to<long>()});
      if (c) v = *c;
    }
    g.set(p, v);
  }
  return g;
}

PrefixTable domain_abstract_operator_step(const FiniteFiberMap& m,
                                          const SeqEquation& eq,
                                          const PrefixTable& fsharp,
                                          const std::vector<long>& extents) {
  PrefixTable g = concretize_table(m, fsharp, extents);
  return domain_abstract_table(m, apply_operator(eq, g));
}

PrefixTable domain_abstract_operator_step(const FiniteFiberMap& m,
                                          const PWEquation& pw,
                                          const PrefixTable& fsharp,
                                          const std::vector<long>& extents) {
  PrefixTable g = concretize_table(m, fsharp, extents);
  return domain_abstract_table(m, pw_apply_operator(pw, g));
}

namespace {

template <typename Step>
ReduceResult reduce_loop(const FiniteFiberMap& m,
                         const std::vector<long>& extents, long max_iters,
                         Step step) {
  long A = reduced_extent(m, extents);
  if (max_iters <= 0) max_iters = 2 * A + 64;
  PrefixTable f(1, {A});
  for (const auto& p : f.points()) f.set(p, XReal(Rat(0)));
  ReduceResult res{std::move(f), 0, false};
  while (res.iters < max_iters) {
    ++res.iters;
    PrefixTable next = step(res.fsharp);
    if (next == res.fsharp) {
      res.stabilized = true;
      break;
    }
    res.fsharp = std::move(next);
  }
  return res;
}

}  // namespace

ReduceResult reduce_fixpoint(const FiniteFiberMap& m, const SeqEquation& eq,
                             const std::vector<long>& extents,
                             long max_iters) {
  return reduce_loop(m, extents, max_iters, [&](const PrefixTable& f) {
    return domain_abstract_operator_step(m, eq, f, extents);
  });
}

ReduceResult reduce_fixpoint(const FiniteFiberMap& m, const PWEquation& pw,
                             const std::vector<long>& extents,
                             long max_iters) {
  return reduce_loop(m, extents, max_iters, [&](const PrefixTable& f) {
    return domain_abstract_operator_step(m, pw, f, extents);
  });
}

namespace {

bool contains_f(const SeqExpr& e) {
  if (e.kind == SeqExpr::Kind::F) return true;
  return (e.a && contains_f(*e.a)) || (e.b && contains_f(*e.b));
}

// Outermost construct that is not monotone in the recursive reads.
const SeqExpr* find_offender(const SeqExpr& e) {
  if (e.kind == SeqExpr::Kind::Comp) return &e;
  if (e.kind == SeqExpr::Kind::Sub && e.b && contains_f(*e.b)) return &e;
  if (e.a)
    if (const SeqExpr* r = find_offender(*e.a)) return r;
  if (e.b)
    if (const SeqExpr* r = find_offender(*e.b)) return r;
  return nullptr;
}

}  // namespace

MonotoneSplit split_monotone_bounds(const SeqExprPtr& e) {
  MonotoneSplit out;
  if (const SeqExpr* off = find_offender(*e)) {
    out.offending = print_expr(*off);
    return out;
  }
  out.separable = true;
  out.lb_body = e;
  out.ub_body = e;
  return out;
}

}  // namespace recbound

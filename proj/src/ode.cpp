#include "recbound/ode.hpp"

#include <algorithm>
#include <stdexcept>

namespace recbound {

Itv itv_point(const Rat& x) { return {x, x}; }

Itv itv_add(const Itv& a, const Itv& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

Itv itv_mul(const Itv& a, const Itv& b) {
  Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

Itv itv_scale(const Itv& a, const Rat& k) {
  Rat x = a.lo * k, y = a.hi * k;
  return k < 0 ? Itv{std::move(y), std::move(x)}
               : Itv{std::move(x), std::move(y)};
}

std::optional<Itv> parse_itv(const std::string& text, std::string* err) {
  auto fail = [&](const std::string& m) {
    if (err) *err = m;
    return std::nullopt;
  };
  std::size_t colon = text.find(':');
  if (colon == std::string::npos) {
    auto v = parse_rat(text);
    if (!v) return fail("bad rational '" + text + "'");
    return itv_point(*v);
  }
  auto lo = parse_rat(text.substr(0, colon));
  auto hi = parse_rat(text.substr(colon + 1));
  if (!lo || !hi) return fail("bad interval '" + text + "'");
  if (*lo > *hi) return fail("interval '" + text + "' has lo > hi");
  return Itv{*lo, *hi};
}

std::string itv_to_string(const Itv& a) {
  return "[" + rat_to_string(a.lo) + ", " + rat_to_string(a.hi) + "]";
}

namespace {

void check_params(const OdeParams& p) {
  if (!p.alpha.proper() || !p.beta.proper() || !p.gamma.proper())
    throw std::invalid_argument("improper parameter interval");
  if (p.alpha.lo < 0 || p.beta.lo < 0 || p.gamma.lo < 0)
    throw std::invalid_argument("parameter envelopes must stay nonnegative");
  if (p.eps <= 0) throw std::invalid_argument("step size must be positive");
}

}  // namespace

Itv euler_step_bound(const OdeParams& p, const Itv& cand) {
  check_params(p);
  if (!cand.proper()) throw std::invalid_argument("improper candidate");
  if (Rat(1) - p.eps * p.beta.hi < 0)
    throw std::invalid_argument(
        "step size violation: 1 - eps*sup(beta) is negative");
  Itv inner = itv_add(itv_add(itv_point(Rat(1)), itv_scale(p.beta, -p.eps)),
                      itv_mul(itv_scale(p.alpha, -p.eps), cand));
  return itv_add(itv_mul(cand, inner), itv_scale(p.gamma, p.eps));
}

bool check_const_postfix(const OdeParams& p, const Rat& M) {
  check_params(p);
  if (M <= 0) throw std::invalid_argument("M must be positive");
  Itv box{Rat(0), M};
  if (!box.contains(p.v0)) return false;
  for (int halvings = 0; halvings < 3; ++halvings) {
    OdeParams q = p;
    for (int h = 0; h < halvings; ++h) q.eps /= 2;
    if (!euler_step_bound(q, box).subset_of(box)) return false;
  }
  return true;
}

namespace {

Rat round_down_dyadic(const Rat& x, int frac_bits) {
  Int scale = Int(1) << frac_bits;
  return Rat(rat_floor(x * scale), scale);
}

Rat round_up_dyadic(const Rat& x, int frac_bits) {
  Int scale = Int(1) << frac_bits;
  return Rat(-rat_floor(-(x * scale)), scale);
}

}  // namespace

SimEnclosure euler_simulate(const OdeParams& p, long steps, const Rat& M,
                            int frac_bits) {
  SimEnclosure out;
  Itv v = itv_point(p.v0);
  Itv box{Rat(0), M};
  out.stayed = v.subset_of(box);
  for (long s = 0; s < steps; ++s) {
    Itv w = euler_step_bound(p, v);
    // outward rounding caps the endpoint denominators at 2^frac_bits,
    // keeping 500 exact-squaring steps tractable
    v = Itv{round_down_dyadic(w.lo, frac_bits),
            round_up_dyadic(w.hi, frac_bits)};
    ++out.steps;
    if (!v.subset_of(box)) {
      out.stayed = false;
      break;
    }
  }
  out.final_v = v;
  return out;
}

}  // namespace recbound

#pragma once

#include <optional>
#include <string>

#include "recbound/rational.hpp"

namespace recbound {

// Closed rational interval [lo, hi] with exact endpoints.
struct Itv {
  Rat lo, hi;

  bool proper() const { return lo <= hi; }
  bool contains(const Rat& x) const { return lo <= x && x <= hi; }
  bool subset_of(const Itv& o) const { return o.lo <= lo && hi <= o.hi; }
  bool operator==(const Itv& o) const { return lo == o.lo && hi == o.hi; }
};

Itv itv_point(const Rat& x);
Itv itv_add(const Itv& a, const Itv& b);
// Endpoints are the extreme products of the four endpoint pairs.
Itv itv_mul(const Itv& a, const Itv& b);
// Negative k flips the ends.
Itv itv_scale(const Itv& a, const Rat& k);

// "lo:hi", or a single rational for a point interval.
std::optional<Itv> parse_itv(const std::string& text,
                             std::string* err = nullptr);
std::string itv_to_string(const Itv& a);

// Time-invariant parameter envelopes of the discretized dynamics
//   v' = v + eps * (-alpha*v^2 - beta*v + gamma),
// factored as v * ((1 - eps*beta) + (-eps*alpha)*v) + eps*gamma.
struct OdeParams {
  Itv alpha, beta, gamma;  // each within [0, inf)
  Rat v0;
  Rat eps;  // positive
};

// Image of a candidate interval under one discretized step with
// interval-valued parameters, by the factored form above.  Throws on
// invalid parameters, an improper candidate, and when
// 1 - eps * sup(beta) < 0 (step size too coarse).
Itv euler_step_bound(const OdeParams& p, const Itv& cand);

// True iff v0 lies in [0, M] and the step maps [0, M] into itself --
// then [0, M] contains every iterate of the eps-discretized dynamics
// from v0, at any horizon.  The self-map condition is re-checked at
// eps/2 and eps/4; that stand-in for monotonicity in eps is a
// heuristic, so the certificate speaks only for the checked step
// sizes.  M must be positive.
bool check_const_postfix(const OdeParams& p, const Rat& M);

// Outward-rounded trajectory enclosure: starting from [v0, v0], each
// step applies euler_step_bound and rounds the ends outward to
// frac_bits binary digits.  The exact rational trajectory of every
// parameter choice inside the envelopes stays inside each enclosure,
// so `stayed` certifies those trajectories never leave [0, M].
struct SimEnclosure {
  bool stayed = true;  // enclosure within [0, M] after every step
  Itv final_v;
  long steps = 0;
};
SimEnclosure euler_simulate(const OdeParams& p, long steps, const Rat& M,
                            int frac_bits = 96);

}  // namespace recbound

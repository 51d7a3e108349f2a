#pragma once

#include <optional>
#include <string>
#include <vector>

#include "recbound/piecewise.hpp"
#include "recbound/rational.hpp"
#include "recbound/seq_lang.hpp"

namespace recbound {

// Monotone affine index map m(x) = sum_j c_j x_j with every c_j >= 1,
// so each level set {x in N^d : m(x) = a} is finite.
struct FiniteFiberMap {
  int arity = 1;
  std::vector<Int> coef;  // one per axis, all >= 1

  Int apply(const std::vector<long>& p) const;
};

// Map text: terms joined by '+', each an optional positive integer
// factor times a variable ("x + 2*y").  Variables: x/y/z/w name axes
// 0-3, x<k> names axis k, n names axis 0.  Every axis up to the given
// arity must end up with a positive coefficient.
std::optional<FiniteFiberMap> parse_fiber_map(const std::string& text,
                                              int arity,
                                              std::string* err = nullptr);

// Number of reduced indices for a box: m reaches sum_j c_j (N_j - 1)
// on [0..N_0) x ... so the reduction lives on [0 .. that sum].
long reduced_extent(const FiniteFiberMap& m, const std::vector<long>& extents);

// Best one-variable abstraction of a table: out(a) = sup of f over the
// level set m(x) = a, computed exactly by enumerating the level set.
// An index is Undefined when its level set leaves f's box (the sup
// would depend on unseen cells) or touches an undefined cell; a level
// set with no integer point gives 0, the sup of nothing.
PrefixTable domain_abstract_table(const FiniteFiberMap& m,
                                  const PrefixTable& f);

// Concretization on a box: g(x) = fsharp(m(x)); undefined or
// out-of-range reduced indices are read as 0.
PrefixTable concretize_table(const FiniteFiberMap& m,
                             const PrefixTable& fsharp,
                             const std::vector<long>& extents);

// One step of the reduced operator on the box with the given extents:
// concretize fsharp, apply the operator once (reads outside the box
// taking 0), abstract back.
PrefixTable domain_abstract_operator_step(const FiniteFiberMap& m,
                                          const SeqEquation& eq,
                                          const PrefixTable& fsharp,
                                          const std::vector<long>& extents);
PrefixTable domain_abstract_operator_step(const FiniteFiberMap& m,
                                          const PWEquation& pw,
                                          const PrefixTable& fsharp,
                                          const std::vector<long>& extents);

struct ReduceResult {
  PrefixTable fsharp;  // arity 1, on the reduced extent
  long iters = 0;
  bool stabilized = false;
};

// Iterates the reduced operator from the all-zero table until it
// repeats (or the budget runs out; default 2 * reduced extent + 64).
ReduceResult reduce_fixpoint(const FiniteFiberMap& m, const SeqEquation& eq,
                             const std::vector<long>& extents,
                             long max_iters = 0);
ReduceResult reduce_fixpoint(const FiniteFiberMap& m, const PWEquation& pw,
                             const std::vector<long>& extents,
                             long max_iters = 0);

// Certificate that the interval version of the equation decouples into
// independent lower- and upper-bound equations: every construct must be
// monotone in the recursive reads, which fails exactly on subtraction
// with a recursive right operand and on composition.  When separable,
// both components are governed by the body itself (upper-bound analysis
// of the body bounds the upper interval component).
struct MonotoneSplit {
  bool separable = false;
  std::string offending;        // printed subterm when not separable
  SeqExprPtr lb_body, ub_body;  // both alias the body when separable
};
MonotoneSplit split_monotone_bounds(const SeqExprPtr& e);

}  // namespace recbound

#pragma once

#include <string>
#include <vector>

#include "recbound/coeffvec.hpp"
#include "recbound/seq_lang.hpp"

namespace recbound {

// Transfer functions over generator sets.  Each consumes upper bounds on its
// operands and returns an upper bound on the operation's result; all
// sequence values are nonnegative extended rationals, so products and
// truncated subtraction behave monotonically.

GenSet tf_const(const BasisId& basis, const Rat& c);

// Bound on the coordinate along `axis`.  Bases with no element equal to the
// coordinate give top and record a warning.
GenSet tf_var(const BasisId& basis, int axis,
              std::vector<std::string>* warnings = nullptr);

GenSet tf_f(const GenSet& fgen);

GenSet tf_add(const GenSet& a, const GenSet& b);

// f - g <= f for nonnegative g, so the subtrahend is dropped entirely.
GenSet tf_sub(const GenSet& a, const GenSet& b);

GenSet tf_mul(const GenSet& a, const GenSet& b,
              std::vector<std::string>* warnings = nullptr);

// Composition o(floor(i(n))), clamped to the value range.  Tracked exactly
// over the affine basis; anything else gives top with a warning.
GenSet tf_comp(const GenSet& outer, const GenSet& inner,
               std::vector<std::string>* warnings = nullptr);

// Shift expansion matrix M: evaluating a coefficient vector v at n+1 equals
// evaluating M v at n.  Univariate bases only; entries are nonnegative.
std::vector<std::vector<Rat>> pop_matrix(const BasisId& basis);

// Shift of a single bound, exact per generator: pop distributes over the
// pointwise minimum of a generator set.
CoeffVec tf_pop(const CoeffVec& g);
CoeffVec tf_pop_affine(const CoeffVec& g);
CoeffVec tf_pop_binomial(const CoeffVec& g);
CoeffVec tf_pop_stirling(const CoeffVec& g);
CoeffVec tf_pop_exppoly(const CoeffVec& g);
GenSet tf_pop_set(const GenSet& s);

// Minimal bounds q with q(0) >= boundary and q(n+1) >= body(n); push also
// distributes over pointwise minima, so sets map generator by generator.
GenSet tf_push(const BasisId& basis, const Rat& boundary, const CoeffVec& body);
GenSet tf_push_affine(const BasisId& basis, const Rat& boundary,
                      const CoeffVec& body);
GenSet tf_push_binomial(const BasisId& basis, const Rat& boundary,
                        const CoeffVec& body);
GenSet tf_push_exppoly(const BasisId& basis, const Rat& boundary,
                       const CoeffVec& body);
GenSet tf_push_set(const BasisId& basis, const Rat& boundary,
                   const GenSet& body);

// Evaluates e bottom-up with every read of the recursive symbol replaced by
// fgen.  Warnings collect each place an operation gave up precision.
GenSet abstract_eval(const SeqExpr& e, const BasisId& basis, const GenSet& fgen,
                     std::vector<std::string>* warnings = nullptr);

}  // namespace recbound

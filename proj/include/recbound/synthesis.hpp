#pragma once

#include <vector>

#include "recbound/coeffvec.hpp"

namespace recbound {

// One row: sum_i lhs[i] * q_i >= rhs over unknowns q_i >= 0.
// All lhs entries are nonnegative, so raising any unknown never breaks a
// previously satisfied row.
struct Ineq {
  std::vector<Rat> lhs;
  XReal rhs;
};

struct LinearSystem {
  long dim = 0;
  std::vector<Ineq> rows;
};

// Validity system for the boundary-prepend operator: a solution q is a
// sound result bound whenever q(0) >= c and the coefficient expansion of
// q(n+1) dominates the body bound coefficientwise.  Supported bases:
// affine, binomial, stirling, stirling_binomial.
LinearSystem push_system(const BasisId& basis, const Rat& c,
                         const CoeffVec& body);

bool satisfies(const LinearSystem& sys, const std::vector<XReal>& cand);
bool satisfies(const LinearSystem& sys, const CoeffVec& cand);

// Minimal solutions of the system, found by greedy raise-only sweeps over
// every subset of rows: one sweep processes rows by descending
// highest-unknown and raises the lowest-index unknown of each row, one
// ascends and raises the highest-index unknown.  Results are filtered
// against the full system and pruned to an antichain.  Systems with more
// than 12 unknowns are rejected ("budget exceeded").
std::vector<std::vector<XReal>> minimal_solutions(const LinearSystem& sys);

// Wraps minimal_solutions into a generator set over the given basis.
GenSet minimal_generators(const BasisId& basis, const LinearSystem& sys);

}  // namespace recbound

#pragma once

#include <string>
#include <vector>

#include "recbound/basis.hpp"
#include "recbound/xreal.hpp"

namespace recbound {

// Nonnegative coefficient vector over a basis of nonnegative elements.
// Denotes the pointwise bound sum_i coeffs[i] * element_i(n).
// A vector is top when it bounds nothing: either the explicit flag is set
// or the coefficient of an everywhere-positive element is infinite.
// normalize_top() folds the latter case into the former so equality is
// syntactic.
struct CoeffVec {
  BasisId basis;
  std::vector<XReal> coeffs;
  bool top = false;

  CoeffVec() : basis(BasisId::Affine()) {}
  CoeffVec(BasisId b, std::vector<XReal> c)
      : basis(std::move(b)), coeffs(std::move(c)) {
    normalize_top();
  }

  static CoeffVec make_top(const BasisId& b);
  static CoeffVec zero(const BasisId& b);

  bool is_top() const { return top; }
  void normalize_top();

  // Bound value at a point; top evaluates to +inf everywhere.
  XReal eval(const std::vector<long>& point) const;

  bool operator==(const CoeffVec& o) const;
  bool operator!=(const CoeffVec& o) const { return !(*this == o); }

  // Lexicographic coefficient order with top sorted last; total on a
  // fixed basis, used only to keep generator lists deterministic.
  bool lex_less(const CoeffVec& o) const;

  std::string str() const;
};

// g1 dominates g2 when g1 <= g2 coefficientwise, so g1's bound is
// pointwise at or below g2's and g2 is redundant in a min.
bool dominates(const CoeffVec& g1, const CoeffVec& g2);

// Finite set of generators; denotes the pointwise min of its members.
// Kept normalized: no generator dominates another, sorted lexicographically.
struct GenSet {
  BasisId basis;
  std::vector<CoeffVec> gens;

  GenSet() : basis(BasisId::Affine()) {}
  explicit GenSet(BasisId b) : basis(std::move(b)) {}
  GenSet(BasisId b, std::vector<CoeffVec> g);

  static GenSet top(const BasisId& b);
  static GenSet singleton(CoeffVec g);

  bool is_top() const;
  XReal eval(const std::vector<long>& point) const;

  bool operator==(const GenSet& o) const;
  bool operator!=(const GenSet& o) const { return !(*this == o); }

  std::string str() const;
};

// Remove dominated generators and sort; top collapses to the single
// top generator.
GenSet normalize(GenSet s);

// Least upper bound: pairwise coordinatewise max of generators.
GenSet join(const GenSet& a, const GenSet& b);

// Greatest lower bound: union of generators.
GenSet meet(const GenSet& a, const GenSet& b);

// a <= b in the abstract order (a's min-bound is pointwise <= b's):
// every generator of b is dominated by some generator of a.
bool leq_abs(const GenSet& a, const GenSet& b);

// Coordinatewise max of two generators (used by join).
CoeffVec coord_max(const CoeffVec& a, const CoeffVec& b);

}  // namespace recbound

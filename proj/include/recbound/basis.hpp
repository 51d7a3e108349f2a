#pragma once

#include <string>
#include <vector>

#include "recbound/rational.hpp"
#include "recbound/xreal.hpp"

namespace recbound {

// Exact binomial coefficient, 0 when k > n. Memoized up to the table cap.
Int binomial(long n, long k);

// Stirling numbers of the second kind via the recurrence
// S(n+1,k) = k*S(n,k) + S(n,k-1), S(n,n) = 1, S(n,0) = S(0,n) = 0 for n > 0.
Int stirling2(long n, long k);

// Memo table cap (rows cached); values beyond are recomputed exactly.
void set_combinatorics_cache_cap(long cap);

// Identifies the boundary family a coefficient vector is expressed in.
//
// Univariate kinds and their element lists (index -> function of n):
//   affine:                [n, 1]                       (slope, then constant)
//   monomial(d):           [n^0, n^1, ..., n^d]
//   binomial(d):           [C(n,0), ..., C(n,d)]
//   stirling(m):           [S(n+1,1), ..., S(n+1,m)]    (S(n+1,1) = 1)
//   stirling_binomial(m,d):[S(n+1,b)*C(n,k)], row-major over b=1..m, k=0..d
//   powers(m):             [1^n, 2^n, ..., m^n]         (conversion target)
// tensor([...]) takes one univariate basis per axis; elements are products,
// indexed row-major with axis 0 slowest.
struct BasisId {
  enum class Kind {
    affine,
    monomial,
    binomial,
    stirling,
    stirling_binomial,
    powers,
    tensor
  };

  Kind kind = Kind::affine;
  int deg = 0;   // d for monomial/binomial/stirling_binomial
  int expo = 0;  // m for stirling/stirling_binomial/powers
  std::vector<BasisId> axes;  // tensor only; each entry univariate

  static BasisId Affine() { return {Kind::affine, 0, 0, {}}; }
  static BasisId Monomial(int d) { return {Kind::monomial, d, 0, {}}; }
  static BasisId Binomial(int d) { return {Kind::binomial, d, 0, {}}; }
  static BasisId Stirling(int m) { return {Kind::stirling, 0, m, {}}; }
  static BasisId StirlingBinomial(int m, int d) {
    return {Kind::stirling_binomial, d, m, {}};
  }
  static BasisId Powers(int m) { return {Kind::powers, 0, m, {}}; }
  static BasisId Tensor(std::vector<BasisId> per_axis) {
    BasisId b;
    b.kind = Kind::tensor;
    b.axes = std::move(per_axis);
    return b;
  }

  int arity() const {
    return kind == Kind::tensor ? static_cast<int>(axes.size()) : 1;
  }
  long dimension() const;
  // Index of the everywhere-one element, or -1 if the basis has none
  // (powers always has one: 1^n at index 0).
  long constant_index() const;
  // Index of the element equal to the coordinate along `axis`, or -1.
  long identity_index(int axis = 0) const;

  bool operator==(const BasisId& o) const;
  bool operator!=(const BasisId& o) const { return !(*this == o); }

  std::string str() const;
};

// Value of basis element `idx` at `point` (sizes must match arity).
Int basis_element_value(const BasisId& b, long idx,
                        const std::vector<long>& point);

// For tensor bases: multi-index <-> linear index (axis 0 slowest).
long tensor_linear_index(const BasisId& b, const std::vector<long>& multi);
std::vector<long> tensor_multi_index(const BasisId& b, long linear);

// Exact basis change on a signed coefficient vector. Supported pairs:
// monomial(d) <-> binomial(d), stirling(m) <-> powers(m), plus identity.
// The result is evaluation-equivalent; coefficients may be negative.
struct Converted {
  BasisId to;
  std::vector<Rat> coeffs;
  bool all_nonneg = true;
};
Converted convert_basis(const BasisId& from, const BasisId& to,
                        const std::vector<Rat>& coeffs);

// Signed evaluation used by conversion tests: sum coeff_i * element_i(point).
Rat eval_signed(const BasisId& b, const std::vector<Rat>& coeffs,
                const std::vector<long>& point);

}  // namespace recbound

#include "recbound/multivar.hpp"

#include <stdexcept>

#include "recbound/domains.hpp"
#include "recbound/synthesis.hpp"

namespace recbound {

namespace {

void check_tensor(const BasisId& basis) {
  if (basis.kind != BasisId::Kind::tensor)
    throw std::invalid_argument("expected a tensor basis, got " + basis.str());
  if (basis.dimension() > kTensorDimCap)
    throw std::runtime_error("tensor dimension " +
                             std::to_string(basis.dimension()) +
                             " exceeds cap " + std::to_string(kTensorDimCap));
}

}  // namespace

BasisId tensor_power(const BasisId& axis_basis, int arity) {
  return BasisId::Tensor(std::vector<BasisId>(arity, axis_basis));
}

GenSet tf_pop_axis(const GenSet& s, int axis) {
  check_tensor(s.basis);
  const BasisId& ab = s.basis.axes[axis];
  auto M = pop_matrix(ab);
  long adim = ab.dimension();
  GenSet r(s.basis);
  for (const auto& g : s.gens) {
    if (g.top) {
      r.gens.push_back(g);
      continue;
    }
    CoeffVec p;
    p.basis = s.basis;
    p.coeffs.assign(s.basis.dimension(), XReal(0));
    for (long L = 0; L < s.basis.dimension(); ++L) {
      auto multi = tensor_multi_index(s.basis, L);
      long j = multi[axis];
      XReal acc(0);
      for (long k = 0; k < adim; ++k) {
        if (M[j][k] == 0) continue;
        multi[axis] = k;
        acc = acc + XReal(M[j][k]) *
                        g.coeffs[tensor_linear_index(s.basis, multi)];
      }
      p.coeffs[L] = acc;
    }
    p.normalize_top();
    r.gens.push_back(std::move(p));
  }
  return normalize(std::move(r));
}

GenSet tf_push_axis(const BasisId& basis, int axis, const Rat& boundary,
                    const GenSet& body, std::vector<std::string>* warnings) {
  check_tensor(basis);
  long dim = basis.dimension();
  long ci = basis.constant_index();
  if (ci < 0) {
    if (warnings)
      warnings->push_back("push: " + basis.str() +
                          " lacks a constant element; using top");
    return GenSet::top(basis);
  }
  const BasisId& ab = basis.axes[axis];
  auto M = pop_matrix(ab);
  long adim = ab.dimension();
  int arity = basis.arity();

  // Sample points for the per-candidate cross-check.
  std::vector<std::vector<long>> points;
  {
    std::vector<long> p(arity, 0);
    for (;;) {
      points.push_back(p);
      int i = arity - 1;
      while (i >= 0 && p[i] == 10) p[i--] = 0;
      if (i < 0) break;
      ++p[i];
    }
  }

  GenSet r(basis);
  for (const auto& g : body.gens) {
    LinearSystem sys;
    sys.dim = dim;
    {
      // On the hyperplane x_axis = 0 the value is the boundary constant,
      // and a nonnegative combination is smallest at the all-zero point,
      // where only the constant element is nonzero.
      Ineq base;
      base.lhs.assign(dim, Rat(0));
      base.lhs[ci] = Rat(1);
      base.rhs = XReal(boundary);
      sys.rows.push_back(std::move(base));
    }
    for (long L = 0; L < dim; ++L) {
      auto multi = tensor_multi_index(basis, L);
      long j = multi[axis];
      Ineq row;
      row.lhs.assign(dim, Rat(0));
      for (long k = 0; k < adim; ++k) {
        if (M[j][k] == 0) continue;
        multi[axis] = k;
        row.lhs[tensor_linear_index(basis, multi)] += M[j][k];
      }
      row.rhs = g.top ? XReal::infinity() : g.coeffs[L];
      sys.rows.push_back(std::move(row));
    }

    GenSet cand = minimal_generators(basis, sys);
    for (const auto& q : cand.gens) {
      bool ok = true;
      for (const auto& p : points) {
        XReal expect;
        if (p[axis] == 0) {
          expect = XReal(boundary);
        } else {
          auto shifted = p;
          --shifted[axis];
          expect = g.eval(shifted);
        }
        if (!(q.eval(p) >= expect)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        r.gens.push_back(q);
      } else if (warnings) {
        warnings->push_back("push: dropped candidate " + q.str() +
                            " that failed the sampled cross-check");
      }
    }
  }
  if (r.gens.empty()) return GenSet::top(basis);
  return normalize(std::move(r));
}

}  // namespace recbound

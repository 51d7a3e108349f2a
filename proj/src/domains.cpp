#include "recbound/domains.hpp"

#include <cassert>
#include <optional>
#include <stdexcept>

#include "recbound/multivar.hpp"
#include "recbound/synthesis.hpp"

namespace recbound {

namespace {

void warn(std::vector<std::string>* warnings, std::string msg) {
  if (warnings) warnings->push_back(std::move(msg));
}

bool is_zero_vec(const CoeffVec& v) {
  if (v.top) return false;
  for (const auto& c : v.coeffs)
    if (!c.is_zero()) return false;
  return true;
}

// A bound that is a constant: only the everywhere-one element carries mass.
std::optional<Rat> as_scalar(const CoeffVec& v) {
  if (v.top) return std::nullopt;
  long ci = v.basis.constant_index();
  if (ci < 0) return std::nullopt;
  for (long i = 0; i < v.basis.dimension(); ++i) {
    if (i == ci) continue;
    if (!v.coeffs[i].is_zero()) return std::nullopt;
  }
  if (v.coeffs[ci].is_inf()) return std::nullopt;
  return v.coeffs[ci].value();
}

bool has_inf_coeff(const CoeffVec& v) {
  for (const auto& c : v.coeffs)
    if (c.is_inf()) return true;
  return false;
}

CoeffVec scale_vec(const CoeffVec& v, const Rat& c) {
  if (c == 0) return CoeffVec::zero(v.basis);
  if (v.top) return CoeffVec::make_top(v.basis);
  CoeffVec r = v;
  for (auto& x : r.coeffs) x = x * XReal(c);
  r.normalize_top();
  return r;
}

std::vector<Rat> finite_rats(const CoeffVec& v) {
  std::vector<Rat> out;
  out.reserve(v.coeffs.size());
  for (const auto& c : v.coeffs) out.push_back(c.value());
  return out;
}

// Exact product of two polynomial bounds given in the binomial basis of
// degree d; empty when the product degree exceeds d.
std::optional<std::vector<Rat>> binomial_product(long d,
                                                 const std::vector<Rat>& u,
                                                 const std::vector<Rat>& v) {
  BasisId bin = BasisId::Binomial(static_cast<int>(d));
  BasisId mono = BasisId::Monomial(static_cast<int>(d));
  auto um = convert_basis(bin, mono, u).coeffs;
  auto vm = convert_basis(bin, mono, v).coeffs;
  std::vector<Rat> conv(2 * d + 1, Rat(0));
  for (long i = 0; i <= d; ++i)
    for (long j = 0; j <= d; ++j) conv[i + j] += um[i] * vm[j];
  for (long k = d + 1; k <= 2 * d; ++k)
    if (conv[k] != 0) return std::nullopt;
  conv.resize(d + 1);
  auto back = convert_basis(mono, bin, conv);
  if (!back.all_nonneg) return std::nullopt;
  return back.coeffs;
}

CoeffVec mul_vec(const CoeffVec& u, const CoeffVec& v,
                 std::vector<std::string>* warnings) {
  const BasisId& basis = u.basis;
  // A zero bound forces a zero product: values are nonnegative.
  if (is_zero_vec(u) || is_zero_vec(v)) return CoeffVec::zero(basis);
  if (auto c = as_scalar(u)) return scale_vec(v, *c);
  if (auto c = as_scalar(v)) return scale_vec(u, *c);

  switch (basis.kind) {
    case BasisId::Kind::affine: {
      // (a1 n + b1)(a2 n + b2): the n^2 cross term escapes the basis, so
      // any product of two nonzero slopes saturates the slope.
      XReal a1 = u.top ? XReal::infinity() : u.coeffs[0];
      XReal b1 = u.top ? XReal::infinity() : u.coeffs[1];
      XReal a2 = v.top ? XReal::infinity() : v.coeffs[0];
      XReal b2 = v.top ? XReal::infinity() : v.coeffs[1];
      CoeffVec r;
      r.basis = basis;
      r.coeffs = {XReal::infinity() * (a1 * a2) + a1 * b2 + a2 * b1, b1 * b2};
      r.normalize_top();
      return r;
    }
    case BasisId::Kind::monomial: {
      if (u.top || v.top || has_inf_coeff(u) || has_inf_coeff(v)) break;
      long d = basis.deg;
      auto um = finite_rats(u);
      auto vm = finite_rats(v);
      std::vector<Rat> conv(2 * d + 1, Rat(0));
      for (long i = 0; i <= d; ++i)
        for (long j = 0; j <= d; ++j) conv[i + j] += um[i] * vm[j];
      bool fits = true;
      for (long k = d + 1; k <= 2 * d && fits; ++k) fits = conv[k] == 0;
      if (!fits) break;
      CoeffVec r;
      r.basis = basis;
      for (long k = 0; k <= d; ++k) r.coeffs.push_back(XReal(conv[k]));
      return r;
    }
    case BasisId::Kind::binomial: {
      if (u.top || v.top || has_inf_coeff(u) || has_inf_coeff(v)) break;
      auto p = binomial_product(basis.deg, finite_rats(u), finite_rats(v));
      if (!p) break;
      CoeffVec r;
      r.basis = basis;
      for (const auto& c : *p) r.coeffs.push_back(XReal(c));
      return r;
    }
    case BasisId::Kind::powers: {
      if (u.top || v.top) break;
      long m = basis.expo;
      std::vector<XReal> acc(m, XReal(0));
      bool fits = true;
      for (long i = 0; i < m && fits; ++i) {
        if (u.coeffs[i].is_zero()) continue;
        for (long j = 0; j < m && fits; ++j) {
          if (v.coeffs[j].is_zero()) continue;
          long prod = (i + 1) * (j + 1);  // base of the product term
          if (prod > m) {
            fits = false;
            break;
          }
          acc[prod - 1] = acc[prod - 1] + u.coeffs[i] * v.coeffs[j];
        }
      }
      if (!fits) break;
      CoeffVec r;
      r.basis = basis;
      r.coeffs = std::move(acc);
      return r;
    }
    case BasisId::Kind::stirling_binomial: {
      if (u.top || v.top || has_inf_coeff(u) || has_inf_coeff(v)) break;
      long m = basis.expo;
      long d = basis.deg;
      auto idx = [&](long b, long k) { return (b - 1) * (d + 1) + k; };
      auto pure_poly = [&](const CoeffVec& w) {
        for (long b = 2; b <= m; ++b)
          for (long k = 0; k <= d; ++k)
            if (!w.coeffs[idx(b, k)].is_zero()) return false;
        return true;
      };
      const CoeffVec* poly = pure_poly(u) ? &u : pure_poly(v) ? &v : nullptr;
      const CoeffVec* other = poly == &u ? &v : &u;
      if (!poly) break;
      std::vector<Rat> pc(d + 1);
      for (long k = 0; k <= d; ++k) pc[k] = poly->coeffs[idx(1, k)].value();
      CoeffVec r;
      r.basis = basis;
      r.coeffs.assign(basis.dimension(), XReal(0));
      bool fits = true;
      for (long b = 1; b <= m && fits; ++b) {
        std::vector<Rat> row(d + 1);
        for (long k = 0; k <= d; ++k) row[k] = other->coeffs[idx(b, k)].value();
        auto prod = binomial_product(d, row, pc);
        if (!prod) {
          fits = false;
          break;
        }
        for (long k = 0; k <= d; ++k) r.coeffs[idx(b, k)] = XReal((*prod)[k]);
      }
      if (!fits) break;
      return r;
    }
    default:
      break;
  }
  warn(warnings, "mul: product of " + u.str() + " and " + v.str() +
                     " does not fit " + basis.str() + "; using top");
  return CoeffVec::make_top(basis);
}

}  // namespace

GenSet tf_const(const BasisId& basis, const Rat& c) {
  long ci = basis.constant_index();
  if (ci < 0) return GenSet::top(basis);
  CoeffVec g = CoeffVec::zero(basis);
  g.coeffs[ci] = XReal(c);
  g.normalize_top();
  return GenSet::singleton(std::move(g));
}

GenSet tf_var(const BasisId& basis, int axis,
              std::vector<std::string>* warnings) {
  long ii = basis.identity_index(axis);
  if (ii < 0) {
    warn(warnings, "var: coordinate " + std::to_string(axis) +
                       " has no element in " + basis.str() + "; using top");
    return GenSet::top(basis);
  }
  CoeffVec g = CoeffVec::zero(basis);
  g.coeffs[ii] = XReal(1);
  return GenSet::singleton(std::move(g));
}

GenSet tf_f(const GenSet& fgen) { return fgen; }

GenSet tf_add(const GenSet& a, const GenSet& b) {
  GenSet r(a.basis);
  for (const auto& ga : a.gens)
    for (const auto& gb : b.gens) {
      if (ga.top || gb.top) {
        r.gens.push_back(CoeffVec::make_top(a.basis));
        continue;
      }
      CoeffVec g;
      g.basis = a.basis;
      g.coeffs.resize(ga.coeffs.size());
      for (std::size_t i = 0; i < ga.coeffs.size(); ++i)
        g.coeffs[i] = ga.coeffs[i] + gb.coeffs[i];
      g.normalize_top();
      r.gens.push_back(std::move(g));
    }
  return normalize(std::move(r));
}

GenSet tf_sub(const GenSet& a, const GenSet& b) {
  (void)b;
  return a;
}

GenSet tf_mul(const GenSet& a, const GenSet& b,
              std::vector<std::string>* warnings) {
  GenSet r(a.basis);
  for (const auto& ga : a.gens)
    for (const auto& gb : b.gens) r.gens.push_back(mul_vec(ga, gb, warnings));
  return normalize(std::move(r));
}

GenSet tf_comp(const GenSet& outer, const GenSet& inner,
               std::vector<std::string>* warnings) {
  if (outer.basis.kind != BasisId::Kind::affine) {
    warn(warnings, "comp: only tracked over " + BasisId::Affine().str() +
                       ", not " + outer.basis.str() + "; using top");
    return GenSet::top(outer.basis);
  }
  GenSet r(outer.basis);
  for (const auto& go : outer.gens) {
    if (go.top) {
      r.gens.push_back(CoeffVec::make_top(outer.basis));
      continue;
    }
    const XReal& a1 = go.coeffs[0];
    const XReal& b1 = go.coeffs[1];
    for (const auto& gi : inner.gens) {
      CoeffVec g;
      g.basis = outer.basis;
      if (gi.top) {
        // Unbounded inner argument: only a constant outer bound survives.
        if (a1.is_zero())
          g.coeffs = {XReal(0), b1};
        else
          g = CoeffVec::make_top(outer.basis);
      } else {
        // o(i(n)) = a1*(a2 n + b2) + b1, exact; flooring the inner value
        // only lowers a monotone bound.
        g.coeffs = {a1 * gi.coeffs[0], a1 * gi.coeffs[1] + b1};
      }
      g.normalize_top();
      r.gens.push_back(std::move(g));
    }
  }
  return normalize(std::move(r));
}

std::vector<std::vector<Rat>> pop_matrix(const BasisId& basis) {
  long dim = basis.dimension();
  std::vector<std::vector<Rat>> M(dim, std::vector<Rat>(dim, Rat(0)));
  switch (basis.kind) {
    case BasisId::Kind::affine:
      M[0][0] = Rat(1);  // slope unchanged
      M[1][0] = Rat(1);  // constant picks up one slope step
      M[1][1] = Rat(1);
      return M;
    case BasisId::Kind::monomial:
      // (n+1)^k expands by the binomial theorem.
      for (long j = 0; j < dim; ++j)
        for (long k = j; k < dim; ++k) M[j][k] = Rat(binomial(k, j));
      return M;
    case BasisId::Kind::binomial:
      // C(n+1,k) = C(n,k) + C(n,k-1): coefficient k becomes a_k + a_{k+1}.
      for (long k = 0; k < dim; ++k) {
        M[k][k] = Rat(1);
        if (k + 1 < dim) M[k][k + 1] = Rat(1);
      }
      return M;
    case BasisId::Kind::stirling:
      // S(n+2,b) = b*S(n+1,b) + S(n+1,b-1).
      for (long i = 0; i < dim; ++i) {
        M[i][i] = Rat(i + 1);
        if (i + 1 < dim) M[i][i + 1] = Rat(1);
      }
      return M;
    case BasisId::Kind::powers:
      for (long i = 0; i < dim; ++i) M[i][i] = Rat(i + 1);
      return M;
    case BasisId::Kind::stirling_binomial: {
      long m = basis.expo;
      long d = basis.deg;
      auto idx = [&](long b, long k) { return (b - 1) * (d + 1) + k; };
      // Both shift rules at once: coefficient (b,k) of the shifted vector
      // is b*a_{b,k} + b*a_{b,k+1} + a_{b+1,k} + a_{b+1,k+1}.
      for (long b = 1; b <= m; ++b)
        for (long k = 0; k <= d; ++k) {
          M[idx(b, k)][idx(b, k)] = Rat(b);
          if (k + 1 <= d) M[idx(b, k)][idx(b, k + 1)] = Rat(b);
          if (b + 1 <= m) M[idx(b, k)][idx(b + 1, k)] = Rat(1);
          if (b + 1 <= m && k + 1 <= d)
            M[idx(b, k)][idx(b + 1, k + 1)] = Rat(1);
        }
      return M;
    }
    default:
      throw std::invalid_argument("pop_matrix: unsupported basis " +
                                  basis.str());
  }
}

CoeffVec tf_pop(const CoeffVec& g) {
  if (g.top) return g;
  auto M = pop_matrix(g.basis);
  CoeffVec r;
  r.basis = g.basis;
  r.coeffs.assign(g.coeffs.size(), XReal(0));
  for (std::size_t j = 0; j < M.size(); ++j)
    for (std::size_t k = 0; k < M.size(); ++k)
      if (M[j][k] != 0) r.coeffs[j] = r.coeffs[j] + XReal(M[j][k]) * g.coeffs[k];
  r.normalize_top();
  return r;
}

CoeffVec tf_pop_affine(const CoeffVec& g) { return tf_pop(g); }
CoeffVec tf_pop_binomial(const CoeffVec& g) { return tf_pop(g); }
CoeffVec tf_pop_stirling(const CoeffVec& g) { return tf_pop(g); }
CoeffVec tf_pop_exppoly(const CoeffVec& g) { return tf_pop(g); }

GenSet tf_pop_set(const GenSet& s) {
  GenSet r(s.basis);
  for (const auto& g : s.gens) r.gens.push_back(tf_pop(g));
  return normalize(std::move(r));
}

GenSet tf_push_affine(const BasisId& basis, const Rat& boundary,
                      const CoeffVec& body) {
  XReal a = body.top ? XReal::infinity() : body.coeffs[0];
  XReal b = body.top ? XReal::infinity() : body.coeffs[1];
  XReal c(boundary);
  // Two greedy corners: settle the constant first, or the slope first.
  CoeffVec g1;
  g1.basis = basis;
  g1.coeffs = {xmax(a, b.monus(c)), c};
  CoeffVec g2;
  g2.basis = basis;
  g2.coeffs = {a, xmax(c, b.monus(a))};
  return GenSet(basis, {std::move(g1), std::move(g2)});
}

GenSet tf_push_binomial(const BasisId& basis, const Rat& boundary,
                        const CoeffVec& body) {
  if (basis.deg == 2 && !body.top && !has_inf_coeff(body)) {
    const XReal& a0 = body.coeffs[0];
    const XReal& a1 = body.coeffs[1];
    const XReal& a2 = body.coeffs[2];
    XReal x(boundary);
    // Same two corners as the affine case, one unknown deeper: q1 settles
    // to a1 - a2 from the top, or to a0 - x from the bottom.
    XReal q1s = a1.monus(a2);
    CoeffVec g1;
    g1.basis = basis;
    g1.coeffs = {xmax(x, a0.monus(q1s)), q1s, a2};
    CoeffVec g2;
    g2.basis = basis;
    XReal q1b = a0.monus(x);
    g2.coeffs = {x, q1b, xmax(a2, a1.monus(q1b))};
    assert(satisfies(push_system(basis, boundary, body), g1));
    assert(satisfies(push_system(basis, boundary, body), g2));
    return GenSet(basis, {std::move(g1), std::move(g2)});
  }
  return minimal_generators(basis, push_system(basis, boundary, body));
}

GenSet tf_push_exppoly(const BasisId& basis, const Rat& boundary,
                       const CoeffVec& body) {
  return minimal_generators(basis, push_system(basis, boundary, body));
}

GenSet tf_push(const BasisId& basis, const Rat& boundary,
               const CoeffVec& body) {
  switch (basis.kind) {
    case BasisId::Kind::affine:
      return tf_push_affine(basis, boundary, body);
    case BasisId::Kind::binomial:
      return tf_push_binomial(basis, boundary, body);
    case BasisId::Kind::stirling_binomial:
      return tf_push_exppoly(basis, boundary, body);
    default:
      return minimal_generators(basis, push_system(basis, boundary, body));
  }
}

GenSet tf_push_set(const BasisId& basis, const Rat& boundary,
                   const GenSet& body) {
  GenSet r(basis);
  for (const auto& g : body.gens) {
    GenSet part = tf_push(basis, boundary, g);
    r.gens.insert(r.gens.end(), part.gens.begin(), part.gens.end());
  }
  return normalize(std::move(r));
}

GenSet abstract_eval(const SeqExpr& e, const BasisId& basis, const GenSet& fgen,
                     std::vector<std::string>* warnings) {
  switch (e.kind) {
    case SeqExpr::Kind::Cst:
      return tf_const(basis, e.cst);
    case SeqExpr::Kind::N:
      return tf_var(basis, e.axis, warnings);
    case SeqExpr::Kind::F:
      return tf_f(fgen);
    case SeqExpr::Kind::Add:
      return tf_add(abstract_eval(*e.a, basis, fgen, warnings),
                    abstract_eval(*e.b, basis, fgen, warnings));
    case SeqExpr::Kind::Sub:
      // The subtrahend never contributes to an upper bound.
      return abstract_eval(*e.a, basis, fgen, warnings);
    case SeqExpr::Kind::Mul:
      return tf_mul(abstract_eval(*e.a, basis, fgen, warnings),
                    abstract_eval(*e.b, basis, fgen, warnings), warnings);
    case SeqExpr::Kind::Max:
      // join dominates the pointwise maximum of the two bounds
      return join(abstract_eval(*e.a, basis, fgen, warnings),
                  abstract_eval(*e.b, basis, fgen, warnings));
    case SeqExpr::Kind::Pop: {
      GenSet s = abstract_eval(*e.a, basis, fgen, warnings);
      if (basis.kind == BasisId::Kind::tensor) return tf_pop_axis(s, e.axis);
      return tf_pop_set(s);
    }
    case SeqExpr::Kind::Push: {
      GenSet s = abstract_eval(*e.a, basis, fgen, warnings);
      if (basis.kind == BasisId::Kind::tensor)
        return tf_push_axis(basis, e.axis, e.cst, s, warnings);
      return tf_push_set(basis, e.cst, s);
    }
    case SeqExpr::Kind::Comp:
      return tf_comp(abstract_eval(*e.a, basis, fgen, warnings),
                     abstract_eval(*e.b, basis, fgen, warnings), warnings);
  }
  throw std::logic_error("abstract_eval: unhandled node");
}

}  // namespace recbound

#include "recbound/synthesis.hpp"

#include <algorithm>
#include <stdexcept>

namespace recbound {

namespace {

void add_row(LinearSystem& sys, std::vector<std::pair<long, Rat>> terms,
             XReal rhs) {
  Ineq row;
  row.lhs.assign(sys.dim, Rat(0));
  for (auto& [i, c] : terms) row.lhs[i] += c;
  row.rhs = std::move(rhs);
  sys.rows.push_back(std::move(row));
}

}  // namespace

LinearSystem push_system(const BasisId& basis, const Rat& c,
                         const CoeffVec& body) {
  LinearSystem sys;
  sys.dim = basis.dimension();
  // A top body leaves every shift row with an infinite right side.
  auto body_coeff = [&](long i) {
    return body.top ? XReal::infinity() : body.coeffs[i];
  };
  switch (basis.kind) {
    case BasisId::Kind::affine: {
      add_row(sys, {{1, Rat(1)}}, XReal(c));              // q(0) = v
      add_row(sys, {{0, Rat(1)}}, body_coeff(0));         // slope of q(n+1)
      add_row(sys, {{0, Rat(1)}, {1, Rat(1)}}, body_coeff(1));
      break;
    }
    case BasisId::Kind::binomial: {
      long d = basis.deg;
      add_row(sys, {{0, Rat(1)}}, XReal(c));  // q(0) = q_0
      // q(n+1) expands with Pascal's rule: coeff k becomes q_k + q_{k+1}.
      for (long k = 0; k <= d; ++k) {
        std::vector<std::pair<long, Rat>> t{{k, Rat(1)}};
        if (k + 1 <= d) t.push_back({k + 1, Rat(1)});
        add_row(sys, std::move(t), body_coeff(k));
      }
      break;
    }
    case BasisId::Kind::stirling: {
      long m = basis.expo;
      add_row(sys, {{0, Rat(1)}}, XReal(c));  // q(0) = q_1
      // S(n+2,b) = b*S(n+1,b) + S(n+1,b-1): coeff b becomes b*q_b + q_{b+1}.
      for (long b = 1; b <= m; ++b) {
        std::vector<std::pair<long, Rat>> t{{b - 1, Rat(b)}};
        if (b + 1 <= m) t.push_back({b, Rat(1)});
        add_row(sys, std::move(t), body_coeff(b - 1));
      }
      break;
    }
    case BasisId::Kind::stirling_binomial: {
      long m = basis.expo;
      long d = basis.deg;
      auto idx = [&](long b, long k) { return (b - 1) * (d + 1) + k; };
      add_row(sys, {{idx(1, 0), Rat(1)}}, XReal(c));
      // Both recurrences at once: coeff (b,k) of q(n+1) is
      // b*q_{b,k} + b*q_{b,k+1} + q_{b+1,k} + q_{b+1,k+1}.
      for (long b = 1; b <= m; ++b) {
        for (long k = 0; k <= d; ++k) {
          std::vector<std::pair<long, Rat>> t{{idx(b, k), Rat(b)}};
          if (k + 1 <= d) t.push_back({idx(b, k + 1), Rat(b)});
          if (b + 1 <= m) t.push_back({idx(b + 1, k), Rat(1)});
          if (b + 1 <= m && k + 1 <= d) t.push_back({idx(b + 1, k + 1), Rat(1)});
          add_row(sys, std::move(t), body_coeff(idx(b, k)));
        }
      }
      break;
    }
    default:
      throw std::invalid_argument("push_system: unsupported basis " +
                                  basis.str());
  }
  return sys;
}

bool satisfies(const LinearSystem& sys, const std::vector<XReal>& cand) {
  for (const auto& row : sys.rows) {
    XReal acc(0);
    for (long i = 0; i < sys.dim; ++i)
      if (row.lhs[i] != 0) acc = acc + XReal(row.lhs[i]) * cand[i];
    if (!(acc >= row.rhs)) return false;
  }
  return true;
}

bool satisfies(const LinearSystem& sys, const CoeffVec& cand) {
  if (cand.top)
    return satisfies(sys, std::vector<XReal>(sys.dim, XReal::infinity()));
  return satisfies(sys, cand.coeffs);
}

namespace {

long highest_unknown(const Ineq& row) {
  for (long i = static_cast<long>(row.lhs.size()); i-- > 0;)
    if (row.lhs[i] != 0) return i;
  return -1;
}

long lowest_unknown(const Ineq& row) {
  for (long i = 0; i < static_cast<long>(row.lhs.size()); ++i)
    if (row.lhs[i] != 0) return i;
  return -1;
}

// One greedy pass: rows in the given order, each deficit closed by raising
// a single pivot unknown.  Raising never invalidates earlier rows because
// all lhs coefficients are nonnegative.
std::vector<XReal> sweep(const LinearSystem& sys,
                         const std::vector<std::size_t>& order,
                         bool pivot_low) {
  std::vector<XReal> cand(sys.dim, XReal(0));
  for (std::size_t ri : order) {
    const Ineq& row = sys.rows[ri];
    XReal acc(0);
    for (long i = 0; i < sys.dim; ++i)
      if (row.lhs[i] != 0) acc = acc + XReal(row.lhs[i]) * cand[i];
    XReal deficit = monus(row.rhs, acc);
    if (deficit.is_zero()) continue;
    long piv = pivot_low ? lowest_unknown(row) : highest_unknown(row);
    cand[piv] = cand[piv] + deficit.div(row.lhs[piv]);
  }
  return cand;
}

}  // namespace

std::vector<std::vector<XReal>> minimal_solutions(const LinearSystem& sys) {
  std::vector<std::vector<XReal>> found;
  auto try_subset = [&](const std::vector<std::size_t>& subset) {
    // Order rows by (highest unknown, lowest unknown) so that, e.g., a bound
    // on the last unknown alone is settled before a two-term row ending in
    // it.  This keeps the greedy corners aligned with the closed forms.
    auto keys = [&](std::size_t r) {
      return std::pair<long, long>(highest_unknown(sys.rows[r]),
                                   lowest_unknown(sys.rows[r]));
    };
    std::vector<std::size_t> desc = subset;
    std::stable_sort(desc.begin(), desc.end(),
                     [&](std::size_t a, std::size_t b) { return keys(a) > keys(b); });
    std::vector<std::size_t> asc = subset;
    std::stable_sort(asc.begin(), asc.end(),
                     [&](std::size_t a, std::size_t b) { return keys(a) < keys(b); });
    for (auto& cand : {sweep(sys, desc, /*pivot_low=*/true),
                       sweep(sys, asc, /*pivot_low=*/false)})
      if (satisfies(sys, cand)) found.push_back(cand);
  };

  if (sys.dim > 12)
    throw std::runtime_error("minimal_solutions: budget exceeded (" +
                             std::to_string(sys.dim) + " unknowns, cap 12)");
  if (sys.rows.size() > 16)
    throw std::runtime_error("minimal_solutions: budget exceeded (" +
                             std::to_string(sys.rows.size()) +
                             " rows, cap 16)");
  std::size_t n = sys.rows.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) subset.push_back(i);
    try_subset(subset);
  }

  // Antichain: keep only candidates not coordinatewise above another.
  std::vector<std::vector<XReal>> minimal;
  auto below_eq = [](const std::vector<XReal>& a, const std::vector<XReal>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!(a[i] <= b[i])) return false;
    return true;
  };
  for (std::size_t i = 0; i < found.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < found.size() && !redundant; ++j) {
      if (i == j) continue;
      if (below_eq(found[j], found[i]))
        redundant = found[i] == found[j] ? j < i : true;
    }
    if (!redundant) minimal.push_back(found[i]);
  }
  return minimal;
}

GenSet minimal_generators(const BasisId& basis, const LinearSystem& sys) {
  GenSet out(basis);
  for (auto& sol : minimal_solutions(sys)) {
    CoeffVec g;
    g.basis = basis;
    g.coeffs = sol;
    g.normalize_top();
    out.gens.push_back(std::move(g));
  }
  if (out.gens.empty()) out.gens.push_back(CoeffVec::make_top(basis));
  return normalize(std::move(out));
}

}  // namespace recbound

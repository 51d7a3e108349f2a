#include "recbound/basis.hpp"

#include <mutex>
#include <sstream>
#include <stdexcept>

namespace recbound {

namespace {

long g_cache_cap = 64;
std::vector<std::vector<Int>> g_binom;     // g_binom[n][k], k <= n
std::vector<std::vector<Int>> g_stirling;  // g_stirling[n][k], k <= n
std::mutex g_mutex;

void grow_binom(long n) {
  while (static_cast<long>(g_binom.size()) <= n) {
    long r = static_cast<long>(g_binom.size());
    std::vector<Int> row(r + 1);
    row[0] = 1;
    row[r] = 1;
    for (long k = 1; k < r; ++k) row[k] = g_binom[r - 1][k - 1] + g_binom[r - 1][k];
    g_binom.push_back(std::move(row));
  }
}

void grow_stirling(long n) {
  if (g_stirling.empty()) g_stirling.push_back({Int(1)});  // S(0,0) = 1
  while (static_cast<long>(g_stirling.size()) <= n) {
    long r = static_cast<long>(g_stirling.size());
    std::vector<Int> row(r + 1);
    row[0] = 0;
    row[r] = 1;
    for (long k = 1; k < r; ++k)
      row[k] = Int(k) * g_stirling[r - 1][k] + g_stirling[r - 1][k - 1];
    g_stirling.push_back(std::move(row));
  }
}

Int binom_direct(long n, long k) {
  if (k > n - k) k = n - k;
  Int num = 1, den = 1;
  for (long i = 0; i < k; ++i) {
    num *= Int(n - i);
    den *= Int(i + 1);
  }
  return num / den;
}

Int stirling_direct(long n, long k) {
  // Row DP from scratch; used only past the cache cap.
  std::vector<Int> row(k + 2, 0);
  row[0] = 1;  // row for n = 0
  for (long r = 1; r <= n; ++r) {
    for (long j = std::min<long>(k, r); j >= 1; --j)
      row[j] = Int(j) * row[j] + row[j - 1];
    row[0] = 0;
  }
  return row[k];
}

}  // namespace

Int binomial(long n, long k) {
  if (n < 0 || k < 0) throw std::invalid_argument("binomial: negative input");
  if (k > n) return 0;
  if (n <= g_cache_cap) {
    std::lock_guard<std::mutex> lock(g_mutex);
    grow_binom(n);
    return g_binom[n][k];
  }
  return binom_direct(n, k);
}

Int stirling2(long n, long k) {
  if (n < 0 || k < 0) throw std::invalid_argument("stirling2: negative input");
  if (k > n) return 0;
  if (n <= g_cache_cap) {
    std::lock_guard<std::mutex> lock(g_mutex);
    grow_stirling(n);
    return g_stirling[n][k];
  }
  return stirling_direct(n, k);
}

void set_combinatorics_cache_cap(long cap) {
  std::lock_guard<std::mutex> lock(g_mutex);
  g_cache_cap = cap;
  g_binom.clear();
  g_stirling.clear();
}

long BasisId::dimension() const {
  switch (kind) {
    case Kind::affine:
      return 2;
    case Kind::monomial:
    case Kind::binomial:
      return deg + 1;
    case Kind::stirling:
    case Kind::powers:
      return expo;
    case Kind::stirling_binomial:
      return static_cast<long>(expo) * (deg + 1);
    case Kind::tensor: {
      long d = 1;
      for (const auto& a : axes) d *= a.dimension();
      return d;
    }
  }
  return 0;
}

long BasisId::constant_index() const {
  switch (kind) {
    case Kind::affine:
      return 1;
    case Kind::monomial:
    case Kind::binomial:
      return 0;
    case Kind::stirling:
      return 0;  // S(n+1,1) = 1
    case Kind::powers:
      return 0;  // 1^n
    case Kind::stirling_binomial:
      return 0;  // b=1, k=0
    case Kind::tensor: {
      std::vector<long> multi;
      for (const auto& a : axes) {
        long c = a.constant_index();
        if (c < 0) return -1;
        multi.push_back(c);
      }
      return tensor_linear_index(*this, multi);
    }
  }
  return -1;
}

long BasisId::identity_index(int axis) const {
  switch (kind) {
    case Kind::affine:
      return axis == 0 ? 0 : -1;
    case Kind::monomial:
    case Kind::binomial:
      return (axis == 0 && deg >= 1) ? 1 : -1;
    case Kind::stirling:
    case Kind::powers:
      return -1;
    case Kind::stirling_binomial:
      return (axis == 0 && deg >= 1) ? 1 : -1;  // b=1, k=1
    case Kind::tensor: {
      if (axis < 0 || axis >= arity()) return -1;
      std::vector<long> multi;
      for (int i = 0; i < arity(); ++i) {
        long idx = i == axis ? axes[i].identity_index(0)
                             : axes[i].constant_index();
        if (idx < 0) return -1;
        multi.push_back(idx);
      }
      return tensor_linear_index(*this, multi);
    }
  }
  return -1;
}

bool BasisId::operator==(const BasisId& o) const {
  if (kind != o.kind || deg != o.deg || expo != o.expo) return false;
  if (axes.size() != o.axes.size()) return false;
  for (std::size_t i = 0; i < axes.size(); ++i)
    if (!(axes[i] == o.axes[i])) return false;
  return true;
}

std::string BasisId::str() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::affine:
      os << "affine";
      break;
    case Kind::monomial:
      os << "monomial(" << deg << ")";
      break;
    case Kind::binomial:
      os << "binomial(" << deg << ")";
      break;
    case Kind::stirling:
      os << "stirling(" << expo << ")";
      break;
    case Kind::stirling_binomial:
      os << "stirling_binomial(" << expo << "," << deg << ")";
      break;
    case Kind::powers:
      os << "powers(" << expo << ")";
      break;
    case Kind::tensor: {
      os << "tensor[";
      for (std::size_t i = 0; i < axes.size(); ++i) {
        if (i) os << ",";
        os << axes[i].str();
      }
      os << "]";
      break;
    }
  }
  return os.str();
}

namespace {

Int univariate_element_value(const BasisId& b, long idx, long n) {
  switch (b.kind) {
    case BasisId::Kind::affine:
      return idx == 0 ? Int(n) : Int(1);
    case BasisId::Kind::monomial: {
      Int v = 1;
      for (long i = 0; i < idx; ++i) v *= Int(n);
      return v;
    }
    case BasisId::Kind::binomial:
      return binomial(n, idx);
    case BasisId::Kind::stirling:
      return stirling2(n + 1, idx + 1);
    case BasisId::Kind::powers: {
      Int v = 1;
      for (long i = 0; i < n; ++i) v *= Int(idx + 1);
      return v;
    }
    case BasisId::Kind::stirling_binomial: {
      long cols = b.deg + 1;
      long bb = idx / cols + 1;
      long k = idx % cols;
      return stirling2(n + 1, bb) * binomial(n, k);
    }
    case BasisId::Kind::tensor:
      throw std::logic_error("tensor basis is not univariate");
  }
  return 0;
}

}  // namespace

Int basis_element_value(const BasisId& b, long idx,
                        const std::vector<long>& point) {
  if (static_cast<int>(point.size()) != b.arity())
    throw std::invalid_argument("basis_element_value: arity mismatch");
  if (b.kind != BasisId::Kind::tensor)
    return univariate_element_value(b, idx, point[0]);
  std::vector<long> multi = tensor_multi_index(b, idx);
  Int v = 1;
  for (std::size_t i = 0; i < b.axes.size(); ++i)
    v *= univariate_element_value(b.axes[i], multi[i], point[i]);
  return v;
}

long tensor_linear_index(const BasisId& b, const std::vector<long>& multi) {
  long idx = 0;
  for (std::size_t i = 0; i < b.axes.size(); ++i)
    idx = idx * b.axes[i].dimension() + multi[i];
  return idx;
}

std::vector<long> tensor_multi_index(const BasisId& b, long linear) {
  std::vector<long> multi(b.axes.size());
  for (std::size_t i = b.axes.size(); i-- > 0;) {
    long d = b.axes[i].dimension();
    multi[i] = linear % d;
    linear /= d;
  }
  return multi;
}

namespace {

// Polynomial coefficients (monomial basis, ascending) of C(n,k).
std::vector<Rat> binomial_as_monomials(int k) {
  // Expand n(n-1)...(n-k+1)/k!.
  std::vector<Rat> poly{Rat(1)};
  for (int i = 0; i < k; ++i) {
    std::vector<Rat> next(poly.size() + 1, Rat(0));
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j + 1] += poly[j];
      next[j] += poly[j] * Rat(-i);
    }
    poly = std::move(next);
  }
  Rat kfact(1);
  for (int i = 2; i <= k; ++i) kfact *= i;
  for (auto& c : poly) c /= kfact;
  return poly;
}

std::vector<Rat> matvec(const std::vector<std::vector<Rat>>& m,
                        const std::vector<Rat>& v) {
  std::vector<Rat> out(m.size(), Rat(0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

// Exact inverse by Gauss-Jordan; the matrices here are invertible.
std::vector<std::vector<Rat>> invert(std::vector<std::vector<Rat>> m) {
  std::size_t n = m.size();
  std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) throw std::logic_error("singular basis-change matrix");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    Rat d = m[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      m[col][j] /= d;
      inv[col][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rat f = m[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        m[r][j] -= f * m[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

// Column j holds binomial element j expressed in monomials.
std::vector<std::vector<Rat>> binomial_to_monomial_matrix(int d) {
  std::vector<std::vector<Rat>> m(d + 1, std::vector<Rat>(d + 1, Rat(0)));
  for (int k = 0; k <= d; ++k) {
    auto poly = binomial_as_monomials(k);
    for (std::size_t j = 0; j < poly.size(); ++j) m[j][k] = poly[j];
  }
  return m;
}

// Column b-1 holds S(n+1,b) expressed in powers 1^n..m^n:
// S(n+1,b) = sum_{j=1..b} (-1)^(b-j) C(b,j) * j / b! * j^n.
std::vector<std::vector<Rat>> stirling_to_powers_matrix(int m) {
  std::vector<std::vector<Rat>> t(m, std::vector<Rat>(m, Rat(0)));
  for (int b = 1; b <= m; ++b) {
    Rat bfact(1);
    for (int i = 2; i <= b; ++i) bfact *= i;
    for (int j = 1; j <= b; ++j) {
      Rat c(binomial(b, j) * Int(j));
      c /= bfact;
      if ((b - j) % 2 == 1) c = -c;
      t[j - 1][b - 1] = c;
    }
  }
  return t;
}

}  // namespace

Converted convert_basis(const BasisId& from, const BasisId& to,
                        const std::vector<Rat>& coeffs) {
  if (static_cast<long>(coeffs.size()) != from.dimension())
    throw std::invalid_argument("convert_basis: dimension mismatch");
  Converted out;
  out.to = to;
  if (from == to) {
    out.coeffs = coeffs;
  } else if (from.kind == BasisId::Kind::binomial &&
             to.kind == BasisId::Kind::monomial && from.deg == to.deg) {
    out.coeffs = matvec(binomial_to_monomial_matrix(from.deg), coeffs);
  } else if (from.kind == BasisId::Kind::monomial &&
             to.kind == BasisId::Kind::binomial && from.deg == to.deg) {
    out.coeffs = matvec(invert(binomial_to_monomial_matrix(from.deg)), coeffs);
  } else if (from.kind == BasisId::Kind::stirling &&
             to.kind == BasisId::Kind::powers && from.expo == to.expo) {
    out.coeffs = matvec(stirling_to_powers_matrix(from.expo), coeffs);
  } else if (from.kind == BasisId::Kind::powers &&
             to.kind == BasisId::Kind::stirling && from.expo == to.expo) {
    out.coeffs = matvec(invert(stirling_to_powers_matrix(from.expo)), coeffs);
  } else {
    throw std::invalid_argument("convert_basis: unsupported pair " +
                                from.str() + " -> " + to.str());
  }
  for (const auto& c : out.coeffs)
    if (c < 0) out.all_nonneg = false;
  return out;
}

Rat eval_signed(const BasisId& b, const std::vector<Rat>& coeffs,
                const std::vector<long>& point) {
  Rat v(0);
  for (long i = 0; i < b.dimension(); ++i)
    v += coeffs[i] * Rat(basis_element_value(b, i, point));
  return v;
}

}  // namespace recbound

#include "recbound/coeffvec.hpp"

#include <algorithm>
#include <sstream>

namespace recbound {

CoeffVec CoeffVec::make_top(const BasisId& b) {
  CoeffVec v;
  v.basis = b;
  v.coeffs.assign(b.dimension(), XReal(0));
  v.top = true;
  return v;
}

CoeffVec CoeffVec::zero(const BasisId& b) {
  CoeffVec v;
  v.basis = b;
  v.coeffs.assign(b.dimension(), XReal(0));
  return v;
}

void CoeffVec::normalize_top() {
  if (top) {
    // Canonical representation: zero coefficients under the flag.
    coeffs.assign(basis.dimension(), XReal(0));
    return;
  }
  long ci = basis.constant_index();
  if (ci >= 0 && coeffs[ci].is_inf()) {
    top = true;
    coeffs.assign(basis.dimension(), XReal(0));
  }
}

XReal CoeffVec::eval(const std::vector<long>& point) const {
  if (top) return XReal::infinity();
  XReal acc(0);
  for (long i = 0; i < basis.dimension(); ++i)
    acc = acc + coeffs[i] * XReal(Rat(basis_element_value(basis, i, point)));
  return acc;
}

bool CoeffVec::operator==(const CoeffVec& o) const {
  if (top != o.top) return false;
  if (top) return basis == o.basis;
  return basis == o.basis && coeffs == o.coeffs;
}

bool CoeffVec::lex_less(const CoeffVec& o) const {
  if (top != o.top) return !top;  // top sorts last
  for (std::size_t i = 0; i < coeffs.size() && i < o.coeffs.size(); ++i) {
    if (coeffs[i] < o.coeffs[i]) return true;
    if (o.coeffs[i] < coeffs[i]) return false;
  }
  return coeffs.size() < o.coeffs.size();
}

std::string CoeffVec::str() const {
  if (top) return "top";
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) os << ",";
    os << coeffs[i].str();
  }
  os << ")";
  return os.str();
}

bool dominates(const CoeffVec& g1, const CoeffVec& g2) {
  if (g2.top) return true;
  if (g1.top) return false;
  for (std::size_t i = 0; i < g1.coeffs.size(); ++i)
    if (!(g1.coeffs[i] <= g2.coeffs[i])) return false;
  return true;
}

CoeffVec coord_max(const CoeffVec& a, const CoeffVec& b) {
  if (a.top || b.top) return CoeffVec::make_top(a.basis);
  CoeffVec r;
  r.basis = a.basis;
  r.coeffs.resize(a.coeffs.size());
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    r.coeffs[i] = xmax(a.coeffs[i], b.coeffs[i]);
  r.normalize_top();
  return r;
}

GenSet::GenSet(BasisId b, std::vector<CoeffVec> g) : basis(std::move(b)) {
  gens = std::move(g);
  *this = normalize(std::move(*this));
}

GenSet GenSet::top(const BasisId& b) {
  GenSet s(b);
  s.gens.push_back(CoeffVec::make_top(b));
  return s;
}

GenSet GenSet::singleton(CoeffVec g) {
  GenSet s(g.basis);
  s.gens.push_back(std::move(g));
  return s;
}

bool GenSet::is_top() const {
  return gens.size() == 1 && gens[0].top;
}

XReal GenSet::eval(const std::vector<long>& point) const {
  XReal best = XReal::infinity();
  for (const auto& g : gens) best = xmin(best, g.eval(point));
  return best;
}

bool GenSet::operator==(const GenSet& o) const {
  return basis == o.basis && gens == o.gens;
}

std::string GenSet::str() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i) os << ", ";
    os << gens[i].str();
  }
  os << "}";
  return os.str();
}

GenSet normalize(GenSet s) {
  for (auto& g : s.gens) g.normalize_top();
  // Drop any generator strictly dominated by another; among equals keep one.
  std::vector<CoeffVec> kept;
  for (std::size_t i = 0; i < s.gens.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < s.gens.size() && !redundant; ++j) {
      if (i == j) continue;
      if (dominates(s.gens[j], s.gens[i])) {
        // Tie-break duplicates by index so exactly one copy survives.
        if (s.gens[i] == s.gens[j])
          redundant = j < i;
        else
          redundant = true;
      }
    }
    if (!redundant) kept.push_back(s.gens[i]);
  }
  if (kept.empty()) kept.push_back(CoeffVec::make_top(s.basis));
  std::sort(kept.begin(), kept.end(),
            [](const CoeffVec& a, const CoeffVec& b) { return a.lex_less(b); });
  s.gens = std::move(kept);
  return s;
}

GenSet join(const GenSet& a, const GenSet& b) {
  GenSet r(a.basis);
  for (const auto& ga : a.gens)
    for (const auto& gb : b.gens) r.gens.push_back(coord_max(ga, gb));
  return normalize(std::move(r));
}

GenSet meet(const GenSet& a, const GenSet& b) {
  GenSet r(a.basis);
  r.gens = a.gens;
  r.gens.insert(r.gens.end(), b.gens.begin(), b.gens.end());
  return normalize(std::move(r));
}

bool leq_abs(const GenSet& a, const GenSet& b) {
  for (const auto& gb : b.gens) {
    bool covered = false;
    for (const auto& ga : a.gens) {
      if (dominates(ga, gb)) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

}  // namespace recbound

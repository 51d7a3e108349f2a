#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "recbound/coeffvec.hpp"
#include "recbound/rational.hpp"
#include "recbound/xreal.hpp"

using namespace recbound;

namespace {

// Deterministic random finite or infinite coefficient.
XReal rand_coeff(std::mt19937& g) {
  if (g() % 8 == 0) return XReal::infinity();
  long num = static_cast<long>(g() % 12);
  long den = 1 + static_cast<long>(g() % 4);
  return XReal(Rat(num, den));
}

CoeffVec rand_vec(std::mt19937& g, const BasisId& b) {
  std::vector<XReal> c;
  for (long i = 0; i < b.dimension(); ++i) c.push_back(rand_coeff(g));
  return CoeffVec(b, std::move(c));
}

GenSet rand_set(std::mt19937& g, const BasisId& b) {
  GenSet s(b);
  std::size_t k = 1 + g() % 3;
  for (std::size_t i = 0; i < k; ++i) s.gens.push_back(rand_vec(g, b));
  return normalize(std::move(s));
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rat("3/4").value() == Rat(3, 4));
  CHECK(parse_rat("7").value() == Rat(7));
  CHECK(parse_rat("-2/5").value() == Rat(-2, 5));
  CHECK(parse_rat("6/4").value() == Rat(3, 2));
  CHECK(!parse_rat("1/0").has_value());
  CHECK(!parse_rat("a").has_value());
  CHECK(!parse_rat("").has_value());
  CHECK(rat_to_string(Rat(3, 2)) == "3/2");
  CHECK(rat_to_string(Rat(5)) == "5");
  CHECK(rat_to_string(Rat(-1, 3)) == "-1/3");
  CHECK(rat_floor(Rat(7, 2)) == 3);
  CHECK(rat_floor(Rat(-7, 2)) == -4);
  CHECK(rat_floor(Rat(4)) == 4);
  CHECK(rat_abs(Rat(-3, 2)) == Rat(3, 2));
}

TEST_CASE("extended value arithmetic") {
  XReal inf = XReal::infinity();
  XReal two(2), zero;

  CHECK((two + XReal(Rat(1, 2))) == XReal(Rat(5, 2)));
  CHECK((inf + two).is_inf());
  CHECK((two + inf).is_inf());

  // Zero annihilates even infinity; products are otherwise strict.
  CHECK((zero * inf).is_zero());
  CHECK((inf * zero).is_zero());
  CHECK((inf * two).is_inf());
  CHECK((two * XReal(3)) == XReal(6));

  CHECK(monus(XReal(5), XReal(3)) == XReal(2));
  CHECK(monus(XReal(3), XReal(5)).is_zero());
  CHECK(monus(inf, two).is_inf());
  CHECK(monus(two, inf).is_zero());
  CHECK(monus(inf, inf).is_zero());

  CHECK(XReal(7).div(Rat(2)) == XReal(Rat(7, 2)));
  CHECK(inf.div(Rat(2)).is_inf());

  CHECK(xmin(two, inf) == two);
  CHECK(xmax(two, inf).is_inf());
  CHECK(XReal(2).str() == "2");
  CHECK(XReal(Rat(1, 3)).str() == "1/3");
  CHECK(inf.str() == "inf");
}

TEST_CASE("extended value order is total with infinity on top") {
  std::vector<XReal> vals = {XReal(), XReal(Rat(1, 2)), XReal(1), XReal(7),
                             XReal::infinity()};
  for (std::size_t i = 0; i < vals.size(); ++i)
    for (std::size_t j = 0; j < vals.size(); ++j) {
      CHECK((vals[i] <= vals[j]) == (i <= j));
      CHECK((vals[i] < vals[j]) == (i < j));
    }
}

TEST_CASE("coefficient vector evaluation and top folding") {
  BasisId aff = BasisId::Affine();
  CoeffVec v(aff, {XReal(3), XReal(2)});
  CHECK(v.eval({0}) == XReal(2));
  CHECK(v.eval({5}) == XReal(17));

  // Infinite slope still evaluates to the constant at 0.
  CoeffVec w(aff, {XReal::infinity(), XReal(0)});
  CHECK(!w.is_top());
  CHECK(w.eval({0}).is_zero());
  CHECK(w.eval({1}).is_inf());

  // An infinite coefficient on the constant element bounds nothing.
  CoeffVec t(aff, {XReal(0), XReal::infinity()});
  CHECK(t.is_top());
  CHECK(t.eval({0}).is_inf());
  CHECK(t == CoeffVec::make_top(aff));

  CHECK(CoeffVec::zero(aff).eval({9}).is_zero());
}

TEST_CASE("dominance means pointwise at or below") {
  BasisId aff = BasisId::Affine();
  CoeffVec low(aff, {XReal(1), XReal(0)});
  CoeffVec high(aff, {XReal(1), XReal(2)});
  CHECK(dominates(low, high));
  CHECK(!dominates(high, low));
  CHECK(dominates(low, CoeffVec::make_top(aff)));
  std::mt19937 g(7);
  for (int it = 0; it < 200; ++it) {
    CoeffVec a = rand_vec(g, aff), b = rand_vec(g, aff);
    if (!dominates(a, b)) continue;
    for (long n = 0; n <= 12; ++n) CHECK(a.eval({n}) <= b.eval({n}));
  }
}

TEST_CASE("normalization removes redundant generators and sorts") {
  BasisId aff = BasisId::Affine();
  GenSet s(aff);
  s.gens.push_back(CoeffVec(aff, {XReal(1), XReal(2)}));
  s.gens.push_back(CoeffVec(aff, {XReal(1), XReal(0)}));  // dominates above
  s.gens.push_back(CoeffVec(aff, {XReal(0), XReal(5)}));
  GenSet n = normalize(s);
  REQUIRE(n.gens.size() == 2);
  CHECK(n.gens[0] == CoeffVec(aff, {XReal(0), XReal(5)}));
  CHECK(n.gens[1] == CoeffVec(aff, {XReal(1), XReal(0)}));

  // An empty set denotes no bound at all and collapses to top.
  GenSet e(aff);
  CHECK(normalize(e).is_top());
  CHECK(GenSet::top(aff).eval({3}).is_inf());
}

TEST_CASE("join and meet are bounds in the abstract order") {
  BasisId aff = BasisId::Affine();
  std::mt19937 g(11);
  for (int it = 0; it < 300; ++it) {
    GenSet a = rand_set(g, aff), b = rand_set(g, aff);
    GenSet j = join(a, b), m = meet(a, b);
    CHECK(leq_abs(a, j));
    CHECK(leq_abs(b, j));
    CHECK(leq_abs(m, a));
    CHECK(leq_abs(m, b));
    CHECK(j == join(b, a));
    CHECK(m == meet(b, a));
    // Absorption.
    CHECK(join(a, meet(a, b)) == a);
    CHECK(meet(a, join(a, b)) == a);
  }
}

TEST_CASE("abstract order agrees with pointwise denotation") {
  BasisId aff = BasisId::Affine();
  std::mt19937 g(13);
  for (int it = 0; it < 300; ++it) {
    GenSet a = rand_set(g, aff), b = rand_set(g, aff);
    if (leq_abs(a, b)) {
      for (long n = 0; n <= 15; ++n) CHECK(a.eval({n}) <= b.eval({n}));
    }
    GenSet j = join(a, b), m = meet(a, b);
    for (long n = 0; n <= 15; ++n) {
      CHECK(j.eval({n}) >= xmax(a.eval({n}), b.eval({n})));
      CHECK(m.eval({n}) == xmin(a.eval({n}), b.eval({n})));
    }
  }
}

TEST_CASE("abstract order is a partial order on normal forms") {
  BasisId aff = BasisId::Affine();
  std::mt19937 g(17);
  std::vector<GenSet> pool;
  for (int i = 0; i < 24; ++i) pool.push_back(rand_set(g, aff));
  for (const auto& a : pool) {
    CHECK(leq_abs(a, a));
    for (const auto& b : pool) {
      if (leq_abs(a, b) && leq_abs(b, a)) CHECK(a == b);
      for (const auto& c : pool)
        if (leq_abs(a, b) && leq_abs(b, c)) CHECK(leq_abs(a, c));
    }
  }
}

TEST_CASE("top is absorbing for join and identity for meet") {
  BasisId aff = BasisId::Affine();
  GenSet t = GenSet::top(aff);
  GenSet s = GenSet::singleton(CoeffVec(aff, {XReal(1), XReal(1)}));
  CHECK(join(s, t).is_top());
  CHECK(meet(s, t) == s);
  CHECK(leq_abs(s, t));
  CHECK(!leq_abs(t, s));
}

TEST_CASE("generator set printing is deterministic") {
  BasisId aff = BasisId::Affine();
  GenSet s(aff, {CoeffVec(aff, {XReal(1), XReal(0)}),
                 CoeffVec(aff, {XReal(0), XReal(2)})});
  CHECK(s.str() == "{(0,2), (1,0)}");
  CHECK(GenSet::top(aff).str() == "{top}");
}

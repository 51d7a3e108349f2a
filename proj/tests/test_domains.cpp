#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "recbound/domains.hpp"
#include "recbound/multivar.hpp"
#include "recbound/seq_lang.hpp"

using namespace recbound;

namespace {

GenSet single(const BasisId& b, std::vector<XReal> c) {
  return GenSet::singleton(CoeffVec(b, std::move(c)));
}

XReal rand_coeff(std::mt19937& g, bool allow_inf) {
  if (allow_inf && g() % 10 == 0) return XReal::infinity();
  return XReal(Rat(static_cast<long>(g() % 15),
                   1 + static_cast<long>(g() % 5)));
}

}  // namespace

TEST_CASE("constants and coordinates have exact bounds") {
  BasisId aff = BasisId::Affine();
  CHECK(tf_const(aff, Rat(7)) == single(aff, {XReal(0), XReal(7)}));
  CHECK(tf_var(aff, 0) == single(aff, {XReal(1), XReal(0)}));

  BasisId bin = BasisId::Binomial(2);
  CHECK(tf_const(bin, Rat(3)) == single(bin, {XReal(3), XReal(0), XReal(0)}));
  CHECK(tf_var(bin, 0) == single(bin, {XReal(0), XReal(1), XReal(0)}));

  // No element of the doubling family equals n: the coordinate is
  // unboundable there and a warning is recorded.
  std::vector<std::string> w;
  CHECK(tf_var(BasisId::Stirling(2), 0, &w).is_top());
  CHECK(!w.empty());
}

TEST_CASE("addition adds pairwise, subtraction drops the subtrahend") {
  BasisId aff = BasisId::Affine();
  GenSet a(aff, {CoeffVec(aff, {XReal(1), XReal(0)}),
                 CoeffVec(aff, {XReal(0), XReal(4)})});
  GenSet b = single(aff, {XReal(2), XReal(1)});
  GenSet sum = tf_add(a, b);
  REQUIRE(sum.gens.size() == 2);
  CHECK(sum.gens[0] == CoeffVec(aff, {XReal(2), XReal(5)}));
  CHECK(sum.gens[1] == CoeffVec(aff, {XReal(3), XReal(1)}));

  // Sound because sequence values are nonnegative: x - y <= x.
  CHECK(tf_sub(a, b) == a);
  CHECK(tf_sub(a, GenSet::top(aff)) == a);
}

TEST_CASE("multiplication scales by constants and gives up otherwise") {
  BasisId aff = BasisId::Affine();
  GenSet f = single(aff, {XReal(2), XReal(3)});
  GenSet half = tf_mul(tf_const(aff, Rat(1, 2)), f);
  CHECK(half == single(aff, {XReal(1), XReal(Rat(3, 2))}));
  GenSet twice = tf_mul(f, tf_const(aff, Rat(2)));
  CHECK(twice == single(aff, {XReal(4), XReal(6)}));

  // Two genuinely sloped factors: the quadratic cross term escapes the
  // family, so the slope saturates while the value at 0 stays exact.
  GenSet sq = tf_mul(f, f);
  REQUIRE(sq.gens.size() == 1);
  CHECK(sq.gens[0].coeffs[0].is_inf());
  CHECK(sq.gens[0].coeffs[1] == XReal(9));
  CHECK(sq.eval({0}) == XReal(9));
  CHECK(sq.eval({1}).is_inf());
}

TEST_CASE("composition is tracked over slope-intercept bounds only") {
  BasisId aff = BasisId::Affine();
  GenSet outer = single(aff, {XReal(2), XReal(1)});
  GenSet inner = single(aff, {XReal(3), XReal(2)});
  // 2*(3n+2) + 1 = 6n + 5; flooring the inner value only helps.
  CHECK(tf_comp(outer, inner) == single(aff, {XReal(6), XReal(5)}));

  GenSet idb = single(aff, {XReal(1), XReal(0)});
  CHECK(tf_comp(idb, idb) == idb);

  std::vector<std::string> w;
  BasisId bin = BasisId::Binomial(2);
  CHECK(tf_comp(single(bin, {XReal(0), XReal(1), XReal(0)}),
                single(bin, {XReal(0), XReal(1), XReal(0)}), &w)
            .is_top());
  CHECK(!w.empty());
}

TEST_CASE("shift of a bound matches evaluation one step up") {
  // 500 random vectors across the supported families; exactness is
  // coefficient-level, so infinite entries must shift exactly too.
  std::vector<BasisId> bases = {BasisId::Affine(), BasisId::Binomial(3),
                                BasisId::Stirling(3),
                                BasisId::StirlingBinomial(2, 2)};
  std::mt19937 g(41);
  for (int it = 0; it < 500; ++it) {
    const BasisId& b = bases[it % bases.size()];
    std::vector<XReal> c;
    for (long i = 0; i < b.dimension(); ++i)
      c.push_back(rand_coeff(g, true));
    CoeffVec v(b, c);
    CoeffVec shifted = tf_pop(v);
    for (long n = 0; n <= 25; ++n)
      CHECK(shifted.eval({n}) == v.eval({n + 1}));
  }
}

TEST_CASE("shift matrices expand one step exactly") {
  for (const BasisId& b :
       {BasisId::Affine(), BasisId::Binomial(2), BasisId::Stirling(2)}) {
    auto M = pop_matrix(b);
    REQUIRE(static_cast<long>(M.size()) == b.dimension());
    // Element j at n+1 equals sum_i M[i][j] * element i at n.
    for (long j = 0; j < b.dimension(); ++j)
      for (long n = 0; n <= 10; ++n) {
        Rat lhs(basis_element_value(b, j, {n + 1}));
        Rat rhs(0);
        for (long i = 0; i < b.dimension(); ++i)
          rhs += M[i][j] * Rat(basis_element_value(b, i, {n}));
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("shift distributes over generator sets") {
  BasisId aff = BasisId::Affine();
  GenSet s(aff, {CoeffVec(aff, {XReal(1), XReal(0)}),
                 CoeffVec(aff, {XReal(0), XReal(3)})});
  GenSet popped = tf_pop_set(s);
  for (long n = 0; n <= 20; ++n) CHECK(popped.eval({n}) == s.eval({n + 1}));
  CHECK(tf_pop_set(GenSet::top(aff)).is_top());
}

TEST_CASE("boundary-prepend bounds are sound by construction") {
  std::mt19937 g(43);
  std::vector<BasisId> bases = {BasisId::Affine(), BasisId::Binomial(2),
                                BasisId::Stirling(2)};
  for (int it = 0; it < 300; ++it) {
    const BasisId& b = bases[it % bases.size()];
    std::vector<XReal> c;
    for (long i = 0; i < b.dimension(); ++i)
      c.push_back(rand_coeff(g, false));
    CoeffVec body(b, c);
    Rat boundary(static_cast<long>(g() % 9), 1 + static_cast<long>(g() % 3));
    GenSet q = tf_push(b, boundary, body);
    REQUIRE(!q.gens.empty());
    for (const auto& gen : q.gens) {
      CHECK(gen.eval({0}) >= XReal(boundary));
      for (long n = 0; n <= 15; ++n)
        CHECK(gen.eval({n + 1}) >= body.eval({n}));
    }
  }
}

TEST_CASE("boundary-prepend on slope-intercept bounds is minimal") {
  BasisId aff = BasisId::Affine();
  // Body n + 1 with boundary 0: the single completion n covers it, since
  // n at the shifted index is exactly n + 1.
  GenSet q = tf_push_affine(aff, Rat(0), CoeffVec(aff, {XReal(1), XReal(1)}));
  CHECK(q == single(aff, {XReal(1), XReal(0)}));

  // Body 2 with boundary 1: the plateau and the ramp are incomparable
  // minimal completions, so both are kept.
  GenSet qq = tf_push_affine(aff, Rat(1), CoeffVec(aff, {XReal(0), XReal(2)}));
  GenSet expect(aff, {CoeffVec(aff, {XReal(0), XReal(2)}),
                      CoeffVec(aff, {XReal(1), XReal(1)})});
  CHECK(qq == expect);

  // Boundary above the intercept: the boundary dictates the intercept.
  GenSet q2 = tf_push_affine(aff, Rat(4), CoeffVec(aff, {XReal(1), XReal(1)}));
  for (const auto& gen : q2.gens) CHECK(gen.eval({0}) >= XReal(4));

  // Infinite slope in the body flows through without widening the rest.
  GenSet q3 = tf_push_affine(
      aff, Rat(0), CoeffVec(aff, {XReal::infinity(), XReal(1)}));
  REQUIRE(!q3.gens.empty());
  for (const auto& gen : q3.gens) CHECK(gen.eval({0}) == XReal(0));
}

TEST_CASE("whole-body evaluation composes the pieces") {
  BasisId aff = BasisId::Affine();
  auto eq = parse_equation("eq: push 0 (comp(f, f) + cst(1));");
  REQUIRE(eq.has_value());

  // Starting from the zero bound, one step yields the two minimal
  // completions of boundary 0 with shifted body 1.
  GenSet z = single(aff, {XReal(0), XReal(0)});
  GenSet step1 = abstract_eval(*eq->rhs, aff, z);
  GenSet expect1(aff, {CoeffVec(aff, {XReal(0), XReal(1)}),
                       CoeffVec(aff, {XReal(1), XReal(0)})});
  CHECK(step1 == expect1);

  // The identity bound reproduces itself: a fixed point of the step.
  GenSet idb = single(aff, {XReal(1), XReal(0)});
  CHECK(abstract_eval(*eq->rhs, aff, idb) == idb);

  // A self-product drives the slope out of the family.
  auto bad = parse_equation("eq: f * f;");
  GenSet sq = abstract_eval(*bad->rhs, aff, idb);
  REQUIRE(sq.gens.size() == 1);
  CHECK(sq.gens[0].coeffs[0].is_inf());
  CHECK(sq.eval({0}).is_zero());
}

TEST_CASE("triangular-number step over degree-2 bounds") {
  BasisId bin = BasisId::Binomial(2);
  auto eq = parse_equation("eq: push 0 (f) + n;");
  REQUIRE(eq.has_value());
  // C(n,1) + C(n,2) reproduces itself through the step exactly.
  GenSet tri = single(bin, {XReal(0), XReal(1), XReal(1)});
  GenSet next = abstract_eval(*eq->rhs, bin, tri);
  bool below = leq_abs(next, tri);
  // One extra step stays at or below the candidate: a certificate.
  for (long n = 0; n <= 30 && below; ++n)
    CHECK(next.eval({n}) <= tri.eval({n}));
  CHECK(below);
}

TEST_CASE("axis shift and axis boundary-prepend on product bases") {
  BasisId t2 = tensor_power(BasisId::Affine(), 2);
  std::mt19937 g(47);
  for (int it = 0; it < 100; ++it) {
    std::vector<XReal> c;
    for (long i = 0; i < t2.dimension(); ++i)
      c.push_back(rand_coeff(g, false));
    GenSet s = GenSet::singleton(CoeffVec(t2, c));
    for (int ax = 0; ax < 2; ++ax) {
      GenSet popped = tf_pop_axis(s, ax);
      for (long x = 0; x <= 6; ++x)
        for (long y = 0; y <= 6; ++y) {
          std::vector<long> p{x, y}, q{x, y};
          q[ax] += 1;
          CHECK(popped.eval(p) == s.eval(q));
        }
    }
  }

  // Countdown along the second axis: the bound x1 reproduces itself.
  auto eq = parse_equation("arity 2;\neq: push1 0 (f + cst(1));");
  REQUIRE(eq.has_value());
  std::vector<XReal> idc(t2.dimension(), XReal(0));
  idc[t2.identity_index(1)] = XReal(1);
  GenSet idb = GenSet::singleton(CoeffVec(t2, idc));
  GenSet stepped = abstract_eval(*eq->rhs, t2, idb);
  CHECK(leq_abs(stepped, idb));
}

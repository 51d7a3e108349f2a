#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>

#include "recbound/ode.hpp"

using namespace recbound;

namespace {

Rat q(long n, long d = 1) { return Rat(n) / Rat(d); }

OdeParams base_params() {
  OdeParams p;
  p.alpha = Itv{q(0), q(2)};
  p.beta = itv_point(q(2));
  p.gamma = itv_point(q(1));
  p.v0 = q(1, 4);
  p.eps = q(1, 100);
  return p;
}

}  // namespace

TEST_CASE("interval arithmetic has exact rational endpoints") {
  Itv a{q(0), q(1, 2)};
  Itv b{q(97, 100), q(49, 50)};
  CHECK(itv_mul(a, b) == Itv{q(0), q(49, 100)});
  CHECK(itv_scale(a, q(-1, 50)) == Itv{q(-1, 100), q(0)});
  CHECK(itv_add(a, b) == Itv{q(97, 100), q(74, 50)});
  // Mixed signs: the extreme endpoint products win.
  CHECK(itv_mul(Itv{q(-2), q(3)}, Itv{q(-5), q(4)}) == Itv{q(-15), q(12)});
  CHECK(itv_scale(Itv{q(1), q(2)}, q(-3)) == Itv{q(-6), q(-3)});

  CHECK(itv_point(q(7)).contains(q(7)));
  CHECK(a.contains(q(1, 4)));
  CHECK(!a.contains(q(2, 3)));
  CHECK(a.subset_of(Itv{q(-1), q(1)}));
  CHECK(!Itv{q(-1), q(1)}.subset_of(a));
  CHECK(!Itv{q(1), q(0)}.proper());
}

TEST_CASE("interval text round-trips and rejects reversed ends") {
  auto i = parse_itv("0:2");
  REQUIRE(i.has_value());
  CHECK(*i == Itv{q(0), q(2)});
  CHECK(itv_to_string(*i) == "[0, 2]");

  auto p = parse_itv("1/4");
  REQUIRE(p.has_value());
  CHECK(*p == itv_point(q(1, 4)));

  std::string err;
  CHECK(!parse_itv("3:1", &err).has_value());
  CHECK(err.find("lo > hi") != std::string::npos);
  CHECK(!parse_itv("a:b", &err).has_value());
  CHECK(!parse_itv("", &err).has_value());
}

TEST_CASE("one discretized step maps the half-unit interval into itself") {
  OdeParams p = base_params();
  Itv img = euler_step_bound(p, Itv{q(0), q(1, 2)});
  CHECK(img == Itv{q(1, 100), q(1, 2)});
  CHECK(img.subset_of(Itv{q(0), q(1, 2)}));

  // A tighter target interval is escaped at the top.
  Itv img4 = euler_step_bound(p, Itv{q(0), q(1, 4)});
  CHECK(img4.hi > q(1, 4));
}

TEST_CASE("invalid parameters and candidates are refused") {
  OdeParams coarse = base_params();
  coarse.eps = q(1);  // 1 - eps*sup(beta) = -1
  CHECK_THROWS(euler_step_bound(coarse, Itv{q(0), q(1, 2)}));

  OdeParams neg = base_params();
  neg.alpha = Itv{q(-1), q(0)};
  CHECK_THROWS(euler_step_bound(neg, Itv{q(0), q(1, 2)}));

  OdeParams improper = base_params();
  improper.beta = Itv{q(2), q(1)};
  CHECK_THROWS(euler_step_bound(improper, Itv{q(0), q(1, 2)}));

  OdeParams zeps = base_params();
  zeps.eps = q(0);
  CHECK_THROWS(euler_step_bound(zeps, Itv{q(0), q(1, 2)}));

  CHECK_THROWS(euler_step_bound(base_params(), Itv{q(1), q(0)}));
  CHECK_THROWS(check_const_postfix(base_params(), q(0)));
  CHECK_THROWS(check_const_postfix(base_params(), q(-1)));
}

TEST_CASE("the constant-interval certificate accepts and rejects correctly") {
  CHECK(check_const_postfix(base_params(), q(1, 2)));
  CHECK(!check_const_postfix(base_params(), q(1, 4)));

  OdeParams far = base_params();
  far.v0 = q(3, 4);  // starts outside [0, 1/2]
  CHECK(!check_const_postfix(far, q(1, 2)));
}

TEST_CASE("acceptance boundary sits at the dissipation balance point") {
  // With the quadratic loss allowed to vanish, [0, M] is a self-map of
  // the step exactly when M * beta >= gamma, independent of the step
  // size; the certificate agrees across the whole grid.
  for (long bn : {1L, 2L, 3L})
    for (auto gn : {q(1, 2), q(1), q(2)})
      for (auto M : {q(1, 4), q(1, 2), q(3, 4), q(1), q(3, 2), q(2)}) {
        OdeParams p;
        p.alpha = Itv{q(0), q(2)};
        p.beta = itv_point(q(bn));
        p.gamma = itv_point(gn);
        p.v0 = q(0);
        p.eps = q(1, 100);
        bool expect = M >= gn / q(bn);
        CHECK(check_const_postfix(p, M) == expect);
      }
}

TEST_CASE("the step image is monotone under candidate inclusion") {
  OdeParams p;
  p.alpha = Itv{q(0), q(2)};
  p.beta = Itv{q(1), q(2)};
  p.gamma = Itv{q(1, 2), q(1)};
  p.v0 = q(0);
  p.eps = q(1, 100);

  std::mt19937 rng(97);
  std::uniform_int_distribution<long> num(0, 24);
  for (int round = 0; round < 200; ++round) {
    Rat a = q(num(rng), 8), b = q(num(rng), 8);
    if (a > b) std::swap(a, b);
    Rat margin = q(num(rng) + 1, 16);
    Itv inner{a, b};
    Itv outer{a - margin < 0 ? q(0) : a - margin, b + margin};
    REQUIRE(inner.subset_of(outer));
    CHECK(euler_step_bound(p, inner).subset_of(euler_step_bound(p, outer)));
  }
}

TEST_CASE("long enclosures stay inside the certified interval") {
  for (int i = 0; i < 20; ++i) {
    OdeParams p = base_params();
    p.alpha = Itv{q(0), q(2 * i, 19)};
    SimEnclosure sim = euler_simulate(p, 500, q(1, 2));
    CHECK(sim.stayed);
    CHECK(sim.steps == 500);
    CHECK(sim.final_v.proper());
    CHECK(sim.final_v.subset_of(Itv{q(0), q(1, 2)}));
  }
}

TEST_CASE("the enclosure contains the exact point trajectory") {
  OdeParams p = base_params();
  p.alpha = itv_point(q(0));  // linear dynamics, exact closed iterates
  Rat v = p.v0;
  for (int k = 0; k < 10; ++k) v = v * q(49, 50) + q(1, 100);
  SimEnclosure sim = euler_simulate(p, 10, q(1, 2));
  CHECK(sim.stayed);
  CHECK(sim.final_v.contains(v));
  // Outward rounding to 96 fractional bits keeps the enclosure tight.
  CHECK(sim.final_v.hi - sim.final_v.lo <= Rat(1) / Rat(Int(1) << 80));
}

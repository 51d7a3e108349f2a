#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "recbound/engine.hpp"
#include "recbound/seq_lang.hpp"

using namespace recbound;

namespace {

GenSet single(const BasisId& b, std::vector<XReal> c) {
  return GenSet::singleton(CoeffVec(b, std::move(c)));
}

SeqEquation parse1(const std::string& text) {
  auto eq = parse_equation(text);
  REQUIRE(eq.has_value());
  return *eq;
}

}  // namespace

TEST_CASE("self-composed recursion settles on the identity bound") {
  SeqEquation eq = parse1("eq: push 0 (comp(f, f) + cst(1));");
  AnalysisResult r = analyze(eq, BasisId::Affine());
  CHECK(r.bound == single(BasisId::Affine(), {XReal(1), XReal(0)}));
  CHECK(r.status == Status::ExactPostfix);
  CHECK(r.iters <= 10);
}

TEST_CASE("triangular numbers get their exact degree-2 bound") {
  SeqEquation eq = parse1("eq: push 0 (f) + n;");
  BasisId bin = BasisId::Binomial(2);
  AnalysisResult r = analyze(eq, bin);
  CHECK(r.bound == single(bin, {XReal(0), XReal(1), XReal(1)}));
  CHECK(r.status == Status::ExactPostfix);

  // The same recursion over slope-intercept bounds has no finite slope.
  AnalysisResult ra = analyze(eq, BasisId::Affine());
  REQUIRE(ra.bound.gens.size() == 1);
  CHECK(ra.bound.gens[0].coeffs[0].is_inf());
  CHECK(ra.bound.gens[0].coeffs[1].is_zero());
  CHECK(ra.status == Status::WidenedPostfix);
}

TEST_CASE("doubling recursions need the exponential family") {
  BasisId st = BasisId::Stirling(2);
  AnalysisResult r1 = analyze(parse1("eq: push 1 (cst(2) * f);"), st);
  CHECK(r1.bound == single(st, {XReal(1), XReal(1)}));  // 1 + (2^n - 1)
  CHECK(r1.status == Status::ExactPostfix);

  AnalysisResult r2 = analyze(parse1("eq: push 0 (cst(2) * f + cst(1));"), st);
  CHECK(r2.bound == single(st, {XReal(0), XReal(1)}));  // 2^n - 1 exactly
  CHECK(r2.status == Status::ExactPostfix);
}

TEST_CASE("fixed arithmetic progressions are found exactly") {
  AnalysisResult r = analyze(parse1("eq: push 2 (f + cst(3));"),
                             BasisId::Affine());
  CHECK(r.bound == single(BasisId::Affine(), {XReal(3), XReal(2)}));
  CHECK(r.status == Status::ExactPostfix);
  CHECK(r.trace.size() >= 2);
  CHECK(r.trace.front() == single(BasisId::Affine(), {XReal(0), XReal(0)}));
}

TEST_CASE("dropped subtrahends still give a sound sloped bound") {
  AnalysisResult r = analyze(parse1("eq: push 0 (f + cst(2)) - cst(1);"),
                             BasisId::Affine());
  CHECK(r.bound == single(BasisId::Affine(), {XReal(2), XReal(0)}));
  CHECK(r.status == Status::ExactPostfix);
  PrefixCheck pc = verify_prefix_sampled(
      parse1("eq: push 0 (f + cst(2)) - cst(1);"), r.bound, {30});
  CHECK(pc.sound);
  CHECK(!pc.exact);  // the concrete value is n, the bound is 2n
}

TEST_CASE("threshold choice steers the contraction toward its plateau") {
  SeqEquation eq = parse1("eq: push 4 (cst(1/2) * f + cst(3));");
  // Left alone, the engine verifies the sloped completion first.
  AnalysisResult r = analyze(eq, BasisId::Affine());
  CHECK(r.bound == single(BasisId::Affine(), {XReal(1), XReal(4)}));
  CHECK(r.status == Status::ExactPostfix);

  // With 6 on the ladder and a short delay, the constant coordinate is
  // lifted onto the plateau the values approach, and that verifies.
  WideningCfg cfg;
  cfg.thresholds = {Rat(6)};
  cfg.delay = 1;
  AnalysisResult rw = analyze(eq, BasisId::Affine(), cfg);
  CHECK(rw.bound == single(BasisId::Affine(), {XReal(0), XReal(6)}));
  CHECK(rw.status == Status::WidenedPostfix);
  CHECK(status_exit_code(rw.status) == 0);
}

TEST_CASE("runaway growth saturates instead of looping") {
  AnalysisResult r = analyze(parse1("eq: push 0 (cst(3) * f + cst(1));"),
                             BasisId::Affine());
  REQUIRE(r.bound.gens.size() == 1);
  CHECK(r.bound.gens[0].coeffs[0].is_inf());
  CHECK(r.bound.gens[0].coeffs[1].is_zero());  // still 0 at the boundary
  CHECK(r.status == Status::WidenedPostfix);
  CHECK(r.iters <= WideningCfg{}.max_iters);
}

TEST_CASE("widening lifts only coefficients that keep growing") {
  BasisId aff = BasisId::Affine();
  WideningCfg cfg;
  cfg.delay = 1;
  cfg.thresholds = {Rat(0), Rat(5), Rat(10)};
  WidenState st;
  GenSet a = single(aff, {XReal(1), XReal(3)});
  GenSet b = single(aff, {XReal(1), XReal(4)});
  bool lifted = false;
  GenSet w = widen(a, b, cfg, &st, &lifted);
  CHECK(lifted);
  CHECK(leq_abs(a, w));
  CHECK(leq_abs(b, w));
  // The stable slope is untouched; the growing constant jumps the rung.
  CHECK(w == single(aff, {XReal(1), XReal(5)}));

  // Values past the last rung go straight to infinity; an infinite
  // constant coordinate bounds nothing, so the generator becomes top.
  GenSet c = single(aff, {XReal(1), XReal(12)});
  GenSet w2 = widen(b, c, cfg, &st, &lifted);
  CHECK(w2.is_top());

  // With no delay, every coefficient jumps to the rung above it.
  WideningCfg eager;
  eager.delay = 0;
  eager.thresholds = {Rat(0), Rat(5), Rat(10)};
  GenSet we = widen(a, a, eager);
  CHECK(we == single(aff, {XReal(5), XReal(5)}));
}

TEST_CASE("widening respects the delay before lifting") {
  BasisId aff = BasisId::Affine();
  WideningCfg cfg;
  cfg.delay = 3;
  cfg.thresholds = {Rat(100)};
  WidenState st;
  GenSet cur = single(aff, {XReal(0), XReal(1)});
  bool lifted = false;
  // The first two growth steps pass through; the third consecutive one
  // reaches the delay and lifts.
  GenSet n1 = widen(cur, single(aff, {XReal(0), XReal(2)}), cfg, &st, &lifted);
  CHECK(!lifted);
  CHECK(n1 == single(aff, {XReal(0), XReal(2)}));
  GenSet n2 = widen(n1, single(aff, {XReal(0), XReal(3)}), cfg, &st, &lifted);
  CHECK(!lifted);
  GenSet n3 = widen(n2, single(aff, {XReal(0), XReal(4)}), cfg, &st, &lifted);
  CHECK(lifted);
  CHECK(n3 == single(aff, {XReal(0), XReal(100)}));
}

TEST_CASE("the generator cap folds the closest pair") {
  BasisId aff = BasisId::Affine();
  WideningCfg cfg;
  cfg.max_gens = 2;
  cfg.delay = 99;
  GenSet big(aff, {CoeffVec(aff, {XReal(0), XReal(9)}),
                   CoeffVec(aff, {XReal(1), XReal(0)}),
                   CoeffVec(aff, {XReal(1), XReal(1)})});
  GenSet w = widen(big, big, cfg);
  CHECK(w.gens.size() <= 2);
  CHECK(leq_abs(big, w));
}

TEST_CASE("exit codes follow the outcome") {
  CHECK(status_exit_code(Status::ExactPostfix) == 0);
  CHECK(status_exit_code(Status::WidenedPostfix) == 0);
  CHECK(status_exit_code(Status::SampledOnly) == 2);
  CHECK(status_exit_code(Status::Diverged) == 3);
  CHECK(status_name(Status::ExactPostfix) == "ExactPostfix");
  CHECK(status_name(Status::Diverged) == "Diverged");
}

TEST_CASE("certificates and sampled checks agree on easy cases") {
  SeqEquation eq = parse1("eq: push 2 (f + cst(3));");
  BasisId aff = BasisId::Affine();
  GenSet good = single(aff, {XReal(3), XReal(2)});
  GenSet bad = single(aff, {XReal(3), XReal(1)});
  CHECK(verify_postfix_exact_affine(eq, good));
  CHECK(!verify_postfix_exact_affine(eq, bad));
  CHECK(verify_postfix_abstract(eq, aff, good));
  CHECK(verify_postfix_sampled(eq, good, {20}));
  CHECK(!verify_postfix_sampled(eq, bad, {20}));

  PrefixCheck pc = verify_prefix_sampled(eq, good, {25});
  CHECK(pc.sound);
  CHECK(pc.exact);
  PrefixCheck pb = verify_prefix_sampled(eq, bad, {25});
  CHECK(!pb.sound);
  CHECK(pb.first_violation == std::vector<long>{0});
}

TEST_CASE("a wrong claim is pinned to its first failing index") {
  // Claiming the triangular numbers stay below n fails first at 2,
  // where the value 3 exceeds the claim.
  SeqEquation eq = parse1("eq: push 0 (f) + n;");
  BasisId bin = BasisId::Binomial(2);
  GenSet claim = single(bin, {XReal(0), XReal(1), XReal(0)});
  PrefixCheck pc = verify_prefix_sampled(eq, claim, {51});
  CHECK(!pc.sound);
  CHECK(pc.first_violation == std::vector<long>{2});

  GenSet tri = single(bin, {XReal(0), XReal(1), XReal(1)});
  PrefixCheck pt = verify_prefix_sampled(eq, tri, {101});
  CHECK(pt.sound);
  CHECK(pt.exact);
  CHECK(pt.violations == 0);
}

TEST_CASE("convex combinations of verified bounds stay verified") {
  // Fix one concrete sequence (the progression 3n + 2) and draw random
  // pairs of grid-verified bounds; every convex combination of a pair,
  // evaluated at five interpolation weights, must stay verified.
  SeqEquation eq = parse1("eq: push 2 (f + cst(3));");
  BasisId aff = BasisId::Affine();
  std::mt19937 g(71);
  auto rand_bound = [&] {
    Rat a = Rat(3) + Rat(static_cast<long>(g() % 20),
                         1 + static_cast<long>(g() % 5));
    Rat b = Rat(2) + Rat(static_cast<long>(g() % 20),
                         1 + static_cast<long>(g() % 5));
    return CoeffVec(aff, {XReal(a), XReal(b)});
  };
  const std::vector<Rat> lambdas = {Rat(0), Rat(1, 4), Rat(1, 2), Rat(3, 4),
                                    Rat(1)};
  long failures = 0;
  for (int it = 0; it < 200; ++it) {
    CoeffVec u = rand_bound(), v = rand_bound();
    PrefixCheck cu =
        verify_prefix_sampled(eq, GenSet::singleton(u), {41});
    PrefixCheck cv =
        verify_prefix_sampled(eq, GenSet::singleton(v), {41});
    REQUIRE(cu.sound);
    REQUIRE(cv.sound);
    for (const Rat& l : lambdas) {
      CoeffVec mix(aff, {XReal(Rat(l * u.coeffs[0].value() +
                                   (1 - l) * v.coeffs[0].value())),
                         XReal(Rat(l * u.coeffs[1].value() +
                                   (1 - l) * v.coeffs[1].value()))});
      PrefixCheck cm =
          verify_prefix_sampled(eq, GenSet::singleton(mix), {41});
      if (!cm.sound) ++failures;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("analysis warnings are carried out of the run") {
  AnalysisResult r = analyze(parse1("eq: comp(f, f);"), BasisId::Binomial(2));
  CHECK(!r.warnings.empty());
}

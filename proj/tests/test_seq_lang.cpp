#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "recbound/seq_lang.hpp"

using namespace recbound;

namespace {

SeqExprPtr rand_expr(std::mt19937& g, int depth, int arity) {
  if (depth == 0 || g() % 4 == 0) {
    switch (g() % 3) {
      case 0:
        return SeqExpr::make_cst(Rat(static_cast<long>(g() % 9),
                                     1 + static_cast<long>(g() % 3)));
      case 1:
        return SeqExpr::make_n(static_cast<int>(g() % arity));
      default:
        return SeqExpr::make_f();
    }
  }
  switch (g() % 7) {
    case 0:
      return SeqExpr::make_add(rand_expr(g, depth - 1, arity),
                               rand_expr(g, depth - 1, arity));
    case 1:
      return SeqExpr::make_sub(rand_expr(g, depth - 1, arity),
                               rand_expr(g, depth - 1, arity));
    case 2:
      return SeqExpr::make_mul(rand_expr(g, depth - 1, arity),
                               rand_expr(g, depth - 1, arity));
    case 3:
      return SeqExpr::make_max(rand_expr(g, depth - 1, arity),
                               rand_expr(g, depth - 1, arity));
    case 4:
      return SeqExpr::make_pop(rand_expr(g, depth - 1, arity),
                               static_cast<int>(g() % arity));
    case 5:
      return SeqExpr::make_push(Rat(static_cast<long>(g() % 5)),
                                rand_expr(g, depth - 1, arity),
                                static_cast<int>(g() % arity));
    default:
      if (arity == 1)
        return SeqExpr::make_comp(rand_expr(g, depth - 1, arity),
                                  rand_expr(g, depth - 1, arity));
      return SeqExpr::make_add(rand_expr(g, depth - 1, arity),
                               rand_expr(g, depth - 1, arity));
  }
}

bool same_tree(const SeqExprPtr& a, const SeqExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind || a->cst != b->cst || a->axis != b->axis)
    return false;
  return same_tree(a->a, b->a) && same_tree(a->b, b->b);
}

std::vector<XReal> column(const PrefixTable& t, long upto) {
  std::vector<XReal> out;
  for (long n = 0; n <= upto; ++n) out.push_back(t.get({n}).value());
  return out;
}

}  // namespace

TEST_CASE("printing then parsing is the identity on syntax trees") {
  std::mt19937 g(23);
  for (int it = 0; it < 400; ++it) {
    int arity = 1 + static_cast<int>(g() % 3);
    SeqExprPtr e = rand_expr(g, 4, arity);
    std::string text = print_expr(*e);
    std::string err;
    auto back = parse_seq(text, arity, &err);
    REQUIRE_MESSAGE(back.has_value(), text << ": " << err);
    CHECK_MESSAGE(same_tree(e, *back), text);
    CHECK(print_expr(**back) == text);
  }
}

TEST_CASE("grammar accepts the documented forms") {
  CHECK(parse_expr("cst(3/2)").has_value());
  CHECK(parse_expr("n + f * cst(2)").has_value());
  CHECK(parse_expr("pop(f)").has_value());
  CHECK(parse_expr("pop2(f)").has_value());
  CHECK(parse_expr("push 4 (f + cst(3))").has_value());
  CHECK(parse_expr("push1 0 (f)").has_value());
  CHECK(parse_expr("comp(f, f)").has_value());
  CHECK(parse_expr("max(n, cst(5))").has_value());
  CHECK(parse_expr("((n))").has_value());
  CHECK(parse_expr("x0 + x1 + x2").has_value());

  // n is an alias for the first coordinate.
  auto n = parse_expr("n");
  REQUIRE(n.has_value());
  CHECK((*n)->kind == SeqExpr::Kind::N);
  CHECK((*n)->axis == 0);
}

TEST_CASE("grammar rejects malformed input") {
  CHECK(!parse_expr("cst(-1)").has_value());  // values are nonnegative
  CHECK(!parse_expr("cst(1/0)").has_value());
  CHECK(!parse_expr("push -1 (f)").has_value());
  CHECK(!parse_expr("f +").has_value());
  CHECK(!parse_expr("comp(f)").has_value());
  CHECK(!parse_expr("unknown(f)").has_value());
  CHECK(!parse_expr("(f").has_value());
  CHECK(!parse_expr("f f").has_value());
  CHECK(!parse_expr("").has_value());

  // Arity validation: axis references must stay below the arity,
  // and composition only makes sense for one-variable sequences.
  CHECK(!parse_seq("x1", 1).has_value());
  CHECK(parse_seq("x1", 2).has_value());
  CHECK(!parse_seq("pop1(f)", 1).has_value());
  CHECK(!parse_seq("comp(f, f)", 2).has_value());
}

TEST_CASE("equation files carry an optional arity header") {
  auto e1 = parse_equation("eq: n;");
  REQUIRE(e1.has_value());
  CHECK(e1->arity == 1);

  auto e2 = parse_equation("# comment\narity 2;\neq: x0 + x1;");
  REQUIRE(e2.has_value());
  CHECK(e2->arity == 2);

  // Without a header the arity is inferred from the axes mentioned.
  auto e3 = parse_equation("eq: x1;");
  REQUIRE(e3.has_value());
  CHECK(e3->arity == 2);

  CHECK(!parse_equation("eq: n").has_value());            // missing semicolon
  CHECK(!parse_equation("arity 2;").has_value());         // missing equation
  CHECK(!parse_equation("arity 1;\neq: x1;").has_value());  // axis too high
  std::string err;
  CHECK(!parse_equation_file("/nonexistent/zzz.eq", &err).has_value());
  CHECK(!err.empty());
}

TEST_CASE("prefix tables index a box in lexicographic order") {
  PrefixTable t(2, {3, 2});
  CHECK(t.arity() == 2);
  CHECK(t.in_box({2, 1}));
  CHECK(!t.in_box({3, 0}));
  CHECK(!t.in_box({0, -1}));
  auto pts = t.points();
  REQUIRE(pts.size() == 6);
  CHECK(pts.front() == std::vector<long>{0, 0});
  CHECK(pts[1] == std::vector<long>{0, 1});
  CHECK(pts.back() == std::vector<long>{2, 1});

  // Cells start undefined and can be written or cleared.
  CHECK(!t.get({1, 1}).has_value());
  t.set({1, 1}, XReal(5));
  CHECK(t.get({1, 1}).value() == XReal(5));

  PrefixTable u(2, {3, 2});
  CHECK(!(t == u));
  u.set({1, 1}, XReal(5));
  CHECK(t == u);
  t.set({1, 1}, std::nullopt);
  CHECK(!(t == u));
}

TEST_CASE("iterated evaluation reproduces closed forms") {
  // Triangular numbers: each step adds the index.
  auto quad = parse_equation("eq: push 0 (f) + n;");
  REQUIRE(quad.has_value());
  auto kp = concrete_lfp_prefix(*quad, {5});
  CHECK(kp.stabilized);
  CHECK(column(kp.table, 4) ==
        std::vector<XReal>{XReal(0), XReal(1), XReal(3), XReal(6), XReal(10)});

  // Self-composed reads: the least solution is the identity.
  auto nested = parse_equation("eq: push 0 (comp(f, f) + cst(1));");
  REQUIRE(nested.has_value());
  auto kn = concrete_lfp_prefix(*nested, {6});
  CHECK(kn.stabilized);
  CHECK(column(kn.table, 5) == std::vector<XReal>{XReal(0), XReal(1), XReal(2),
                                                  XReal(3), XReal(4), XReal(5)});

  // Halve and add three from 4: approaches 6 from below.
  auto ag = parse_equation("eq: push 4 (cst(1/2) * f + cst(3));");
  REQUIRE(ag.has_value());
  auto ka = concrete_lfp_prefix(*ag, {4});
  CHECK(column(ka.table, 3) == std::vector<XReal>{XReal(4), XReal(5),
                                                  XReal(Rat(11, 2)),
                                                  XReal(Rat(23, 4))});
}

TEST_CASE("single operator application follows the shift semantics") {
  auto eq = parse_equation("eq: push 7 (f + cst(1));");
  REQUIRE(eq.has_value());
  PrefixTable t(1, {4});
  for (long n = 0; n < 4; ++n) t.set({n}, XReal(10 * n));
  PrefixTable r = apply_operator(*eq, t);
  CHECK(r.get({0}).value() == XReal(7));      // boundary value
  CHECK(r.get({1}).value() == XReal(1));      // f(0) + 1
  CHECK(r.get({3}).value() == XReal(21));     // f(2) + 1

  // pop reads one step up; at the top edge the read leaves the box.
  auto up = parse_equation("eq: pop(f) + cst(2);");
  REQUIRE(up.has_value());
  PrefixTable r2 = apply_operator(*up, t);
  CHECK(r2.get({0}).value() == XReal(12));    // f(1) + 2
  CHECK(r2.get({2}).value() == XReal(32));    // f(3) + 2
  CHECK(r2.get({3}).value() == XReal(2));     // out-of-box read gives 0

  PrefixTable r3 = apply_operator(*up, t, OutOfBoxPolicy::Undefined);
  CHECK(r3.get({2}).has_value());
  CHECK(!r3.get({3}).has_value());            // poisoned instead
}

TEST_CASE("composition floors the inner value") {
  auto eq = parse_equation("eq: comp(f, cst(3/2) * n);");
  REQUIRE(eq.has_value());
  PrefixTable t(1, {8});
  for (long n = 0; n < 8; ++n) t.set({n}, XReal(n * n));
  PrefixTable r = apply_operator(*eq, t);
  CHECK(r.get({2}).value() == XReal(9));   // floor(3) -> f(3)
  CHECK(r.get({3}).value() == XReal(16));  // floor(4.5) = 4 -> f(4)
  CHECK(r.get({6}).value().is_zero());     // floor(9) is outside, reads 0

  auto inf_inner = parse_equation("eq: comp(f, f);");
  PrefixTable ti(1, {2});
  ti.set({0}, XReal::infinity());
  ti.set({1}, XReal(0));
  PrefixTable ri = apply_operator(*inf_inner, ti);
  CHECK(ri.get({0}).value().is_inf());  // infinite inner index
  PrefixTable ru = apply_operator(*inf_inner, ti, OutOfBoxPolicy::Undefined);
  CHECK(!ru.get({0}).has_value());
}

TEST_CASE("truncated subtraction and max evaluate pointwise") {
  auto eq = parse_equation("eq: max(n, cst(3)) - cst(2);");
  REQUIRE(eq.has_value());
  PrefixTable t(1, {7});
  PrefixTable r = apply_operator(*eq, t);
  CHECK(r.get({0}).value() == XReal(1));  // max(0,3) - 2
  CHECK(r.get({5}).value() == XReal(3));  // max(5,3) - 2
  auto sub = parse_equation("eq: cst(2) - n;");
  PrefixTable rs = apply_operator(*sub, t);
  CHECK(rs.get({5}).value().is_zero());   // clamped at zero
}

TEST_CASE("iteration is monotone and stabilizes on anchored recursions") {
  auto eq = parse_equation("eq: push 2 (f + cst(3));");
  REQUIRE(eq.has_value());
  PrefixTable prev(1, {10});
  for (long n = 0; n < 10; ++n) prev.set({n}, XReal(0));
  for (int sweep = 0; sweep < 12; ++sweep) {
    PrefixTable next = apply_operator(*eq, prev);
    for (long n = 0; n < 10; ++n)
      CHECK(prev.get({n}).value() <= next.get({n}).value());
    prev = next;
  }
  auto kp = concrete_lfp_prefix(*eq, {10});
  CHECK(kp.stabilized);
  CHECK(kp.table == prev);
  for (long n = 0; n < 10; ++n)
    CHECK(kp.table.get({n}).value() == XReal(3 * n + 2));

  // An upward read with growth never settles inside the budget.
  auto osc = parse_equation("eq: pop(f) + cst(1);");
  auto ko = concrete_lfp_prefix(*osc, {6}, 5);
  CHECK(!ko.stabilized);
}

TEST_CASE("totality detects reads that escape the box") {
  CHECK(check_totality(*parse_equation("eq: push 0 (f) + n;"), {8}));
  CHECK(check_totality(*parse_equation("eq: cst(5);"), {8}));
  // The shifted read at the top edge leaves the box, so the value there
  // cannot be determined from the box alone.
  CHECK(!check_totality(*parse_equation("eq: pop(f) + cst(1);"), {8}));
}

TEST_CASE("two-variable equations evaluate on the product box") {
  auto eq = parse_equation("arity 2;\neq: push1 0 (f + cst(1));");
  REQUIRE(eq.has_value());
  auto kp = concrete_lfp_prefix(*eq, {4, 5});
  CHECK(kp.stabilized);
  for (long x = 0; x < 4; ++x)
    for (long y = 0; y < 5; ++y)
      CHECK(kp.table.get({x, y}).value() == XReal(y));
}

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fixpoint/expr.hpp"

using namespace fixpoint;

TEST_CASE("parse simple arithmetic") {
  const ExprPtr e = parse_expression("1 - x");
  const ExprPtr expected = make_bin(BinOp::Sub, make_const(1.0), make_var());
  CHECK(expr_equal(e, expected));
  CHECK(eval_expr(e, 0.25) == 0.75);
}

TEST_CASE("precedence and parentheses") {
  CHECK(eval_expr(parse_expression("1 + 2 * 3"), 0) == 7.0);
  CHECK(eval_expr(parse_expression("(1 + 2) * 3"), 0) == 9.0);
  CHECK(eval_expr(parse_expression("2 - 3 - 4"), 0) == -5.0);  // left associative
  CHECK(eval_expr(parse_expression("-x * 2"), 1.5) == -3.0);
  CHECK(eval_expr(parse_expression("8 / 4 / 2"), 0) == 1.0);
}

TEST_CASE("calls and piecewise") {
  CHECK(eval_expr(parse_expression("abs(-3)"), 0) == 3.0);
  CHECK(eval_expr(parse_expression("min(x, 1 - x)"), 0.75) == 0.25);
  CHECK(eval_expr(parse_expression("max(x, 0.5)"), 0.2) == 0.5);

  const ExprPtr step = parse_expression("piecewise(x < 1, 0, 0.5)");
  const ExprPtr expected = make_piecewise(CmpOp::Lt, make_var(), make_const(1.0),
                                          make_const(0.0), make_const(0.5));
  CHECK(expr_equal(step, expected));
  CHECK(eval_expr(step, 0.999) == 0.0);
  CHECK(eval_expr(step, 1.0) == 0.5);
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_expression("1 + * 2");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position == 4);  // the '*'
  }
  CHECK_THROWS_AS(parse_expression(""), ParseError);
  CHECK_THROWS_AS(parse_expression("1 +"), ParseError);
  CHECK_THROWS_AS(parse_expression("min(1)"), ParseError);
  CHECK_THROWS_AS(parse_expression("(1 + 2"), ParseError);
  CHECK_THROWS_AS(parse_expression("1 2"), ParseError);
}

TEST_CASE("unknown identifiers are rejected") {
  try {
    parse_expression("y + 1");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("unknown identifier 'y'") != std::string::npos);
    CHECK(e.position == 0);
  }
}

namespace {

ExprPtr random_ast(std::mt19937_64& rng, int depth) {
  const auto pick = [&rng](int n) { return static_cast<int>(rng() % n); };
  if (depth <= 0 || pick(4) == 0) {
    if (pick(2) == 0) return make_var();
    const double vals[] = {0.0, 1.0, 0.5, 2.0, 0.25, 3.75, 1e-3, 17.0};
    return make_const(vals[pick(8)]);
  }
  switch (pick(5)) {
    case 0: return make_neg(random_ast(rng, depth - 1));
    case 1: {
      const BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div};
      return make_bin(ops[pick(4)], random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    }
    case 2: return make_fn(FnOp::Abs, random_ast(rng, depth - 1));
    case 3:
      return make_fn(pick(2) ? FnOp::Min : FnOp::Max, random_ast(rng, depth - 1),
                     random_ast(rng, depth - 1));
    default: {
      const CmpOp cmps[] = {CmpOp::Lt, CmpOp::Le, CmpOp::Eq, CmpOp::Ge, CmpOp::Gt};
      return make_piecewise(cmps[pick(5)], random_ast(rng, depth - 1), random_ast(rng, depth - 1),
                            random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    }
  }
}

}  // namespace

TEST_CASE("pretty-print round-trips structurally") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 500; ++rep) {
    const ExprPtr ast = random_ast(rng, 4);
    const std::string printed = pretty_print(ast);
    INFO("printed: " << printed);
    const ExprPtr reparsed = parse_expression(printed);
    REQUIRE(expr_equal(ast, reparsed));
  }
}

TEST_CASE("guards parse and evaluate") {
  const GuardExpr g = parse_guard("x < 1");
  CHECK(g.eval(0.999));
  CHECK_FALSE(g.eval(1.0));
  CHECK(guard_to_string(g) == "x < 1");
  const GuardExpr g2 = parse_guard("2 * x >= 1");
  CHECK(g2.eval(0.5));
  CHECK_FALSE(g2.eval(0.49));
  CHECK_THROWS_AS(parse_guard("x + 1"), ParseError);
}

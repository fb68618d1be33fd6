#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "jvf/expr.hpp"

using jvf::DiffExpr;
using jvf::parse_expr;

namespace {

// five-point central difference, Richardson extrapolated
double fd_derivative(const DiffExpr& e, double x, double h = 1e-3) {
  auto d = [&](double hh) {
    return (e.eval(x - 2 * hh) - 8 * e.eval(x - hh) + 8 * e.eval(x + hh) -
            e.eval(x + 2 * hh)) /
           (12 * hh);
  };
  return (16 * d(h / 2) - d(h)) / 15;
}

}  // namespace

TEST_CASE("parsing and evaluation basics") {
  CHECK(parse_expr("2+cos(2*pi*x)").eval(0.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(parse_expr("2+cos(2*pi*x)").eval(0.25) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(parse_expr("1+2*3^2").eval(0.0) == doctest::Approx(19.0));
  CHECK(parse_expr("-x^2").eval(3.0) == doctest::Approx(-9.0));
  CHECK(parse_expr("2*pi").eval(0.0) == doctest::Approx(2 * M_PI));
  CHECK(parse_expr("1e-2 + 2.5E3").eval(0.0) == doctest::Approx(2500.01));
  CHECK(parse_expr("x^-2").eval(2.0) == doctest::Approx(0.25));
  CHECK(parse_expr("sqrt(x)*exp(x)").eval(1.0) == doctest::Approx(std::exp(1.0)));
  CHECK(parse_expr("sin(x)/x").eval(2.0) == doctest::Approx(std::sin(2.0) / 2.0));
  CHECK(parse_expr(" ( x + y ) * 2 ").eval_xy(1.0, 2.0) == doctest::Approx(6.0));
}

TEST_CASE("parse errors carry byte offsets") {
  CHECK_THROWS_WITH_AS(parse_expr("sin(x"), "expected ')' at offset 5",
                       jvf::ParseError);
  try {
    parse_expr("2+foo(x)");
    FAIL("expected ParseError");
  } catch (const jvf::ParseError& e) {
    CHECK(e.offset == 2);
  }
  CHECK_THROWS_AS(parse_expr("x^y"), jvf::ParseError);       // non-literal exponent
  CHECK_THROWS_AS(parse_expr("x^65"), jvf::ParseError);      // exponent cap
  CHECK_THROWS_AS(parse_expr(""), jvf::ParseError);
  CHECK_THROWS_AS(parse_expr("1..2"), jvf::ParseError);
  CHECK_THROWS_AS(parse_expr("x+"), jvf::ParseError);
}

TEST_CASE("evaluation domain errors") {
  CHECK_THROWS_AS(parse_expr("1/(x-1)").eval(1.0), jvf::EvalError);
  CHECK_THROWS_AS(parse_expr("sqrt(x-2)").eval(1.0), jvf::EvalError);
  CHECK_THROWS_AS(parse_expr("x^-1").eval(0.0), jvf::EvalError);
  // sqrt derivative is rejected where the argument vanishes
  const DiffExpr d = parse_expr("sqrt(x)").derivative(1);
  CHECK(d.eval(4.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(d.eval(0.0), jvf::EvalError);
}

TEST_CASE("symbolic derivatives against the finite-difference oracle") {
  const char* exprs[] = {
      "2+cos(2*pi*x)", "1-cos(2*pi*x)", "sin(2*pi*x)^2",
      "exp(sin(x))*cos(x)", "x^3/(2+sin(x))", "sqrt(2+cos(x))",
      "(x^2+1)*(x-3)", "sin(cos(x))"};
  std::mt19937_64 rng(20240817ULL);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (const char* s : exprs) {
    const DiffExpr e = parse_expr(s);
    const DiffExpr d1 = e.derivative(1);
    const DiffExpr d2 = e.derivative(2);
    for (int i = 0; i < 20; ++i) {
      const double x = dist(rng);
      CHECK(d1.eval(x) == doctest::Approx(fd_derivative(e, x)).epsilon(1e-7));
      CHECK(d2.eval(x) == doctest::Approx(fd_derivative(d1, x)).epsilon(1e-7));
    }
  }
}

TEST_CASE("higher-order derivatives of sin close the cycle") {
  const DiffExpr e = parse_expr("sin(x)");
  const DiffExpr d4 = e.derivative(4);
  const DiffExpr d12 = e.derivative(12);
  for (double x : {0.3, 1.1, -0.7}) {
    CHECK(d4.eval(x) == doctest::Approx(std::sin(x)).epsilon(1e-12));
    CHECK(d12.eval(x) == doctest::Approx(std::sin(x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(e.derivative(13), jvf::EvalError);
}

TEST_CASE("partial derivatives in two variables") {
  const DiffExpr e = parse_expr("x^2*y + sin(y)");
  CHECK(e.derivative("x", 1).eval_xy(2.0, 3.0) == doctest::Approx(12.0));
  CHECK(e.derivative("y", 1).eval_xy(2.0, 3.0) ==
        doctest::Approx(4.0 + std::cos(3.0)));
  CHECK(e.derivative("x", 1).derivative("y", 1).eval_xy(2.0, 3.0) ==
        doctest::Approx(4.0));
  CHECK(e.variable_count() == 2);
  CHECK_THROWS_AS(e.eval(1.0), jvf::EvalError);  // ambiguous binding
}

TEST_CASE("serialization round trip and structural equality") {
  for (const char* s : {"2+cos(2*pi*x)", "x^3/(2+sin(x))", "-(x+1)*y"}) {
    const DiffExpr e = parse_expr(s);
    const DiffExpr r = parse_expr(e.serialize());
    CHECK(e.structurally_equal(r));
  }
  CHECK(parse_expr("x+y").structurally_equal(parse_expr(" x + y ")));
  CHECK_FALSE(parse_expr("x+y").structurally_equal(parse_expr("y+x")));
  CHECK(parse_expr("2+cos(2*pi*x)").variables().count("x") == 1);
}

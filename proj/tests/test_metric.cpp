#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "jvf/metric.hpp"

using namespace jvf;

namespace {

LiouvilleTorusMetric example_metric() {
  return LiouvilleTorusMetric(parse_expr("2+cos(2*pi*x)"),
                              parse_expr("1-cos(2*pi*y)"), 1.0);
}

// independent oracle: K = -Laplacian(ln lambda)/(2 lambda) by central
// differences on lambda itself
double fd_curvature(const Metric& m, double x, double y, double h = 1e-4) {
  auto ln = [&](double a, double b) { return std::log(m.lambda(a, b)); };
  const double lap =
      (ln(x + h, y) + ln(x - h, y) + ln(x, y + h) + ln(x, y - h) - 4 * ln(x, y)) /
      (h * h);
  return -lap / (2 * m.lambda(x, y));
}

}  // namespace

TEST_CASE("Gaussian curvature: round sphere chart is K = 1") {
  ConformalChartMetric m(parse_expr("4/(1+x^2+y^2)^2"));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.2, 1.2);
  for (int i = 0; i < 25; ++i) {
    const double x = dist(rng), y = dist(rng);
    CHECK(gauss_curvature(m, x, y) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("Gaussian curvature: flat chart is K = 0") {
  ConformalChartMetric m(parse_expr("1"));
  CHECK(gauss_curvature(m, 0.3, -0.8) == doctest::Approx(0.0));
  ConformalChartMetric scaled(parse_expr("7"));
  CHECK(gauss_curvature(scaled, 0.3, -0.8) == doctest::Approx(0.0));
}

TEST_CASE("Gaussian curvature matches the finite-difference Laplacian oracle") {
  const LiouvilleTorusMetric m = example_metric();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int i = 0; i < 25; ++i) {
    const double x = dist(rng), y = dist(rng);
    CHECK(gauss_curvature(m, x, y) ==
          doctest::Approx(fd_curvature(m, x, y)).epsilon(1e-6));
  }
}

TEST_CASE("Liouville torus metric jets and validation") {
  const LiouvilleTorusMetric m = example_metric();
  const LambdaJet j = m.lambda_jet(0.3, 0.7);
  CHECK(j.v == doctest::Approx(3.0 + std::cos(0.6 * M_PI) - std::cos(1.4 * M_PI)));
  CHECK(j.dx == doctest::Approx(-2 * M_PI * std::sin(0.6 * M_PI)));
  CHECK(j.dy == doctest::Approx(2 * M_PI * std::sin(1.4 * M_PI)));
  CHECK(j.dxy == 0.0);
  CHECK(m.period_y() == 1.0);

  CHECK_THROWS_AS(LiouvilleTorusMetric(parse_expr("2+cos(x)"),
                                       parse_expr("1-cos(2*pi*y)"), 1.0),
                  MetricError);  // not 1-periodic
  CHECK_THROWS_AS(LiouvilleTorusMetric(parse_expr("cos(2*pi*x)"),
                                       parse_expr("1-cos(2*pi*y)"), 1.0),
                  MetricError);  // not positive
  CHECK_THROWS_AS(LiouvilleTorusMetric(parse_expr("2"),
                                       parse_expr("1-cos(2*pi*y)"), 1.0),
                  MetricError);  // constant
  CHECK_THROWS_AS(LiouvilleTorusMetric(parse_expr("2+cos(2*pi*x)"),
                                       parse_expr("1-cos(2*pi*y)"), -1.0),
                  MetricError);  // bad period
  CHECK_THROWS_AS(LiouvilleTorusMetric(parse_expr("2+cos(2*pi*x)+y"),
                                       parse_expr("1-cos(2*pi*y)"), 1.0),
                  MetricError);  // two variables
}

TEST_CASE("Kolokoltsov validation accepts sin^2(2 pi x) and flags branch points") {
  const auto v = validate_kolokoltsov(parse_expr("sin(2*pi*x)^2"),
                                      parse_expr("sin(2*pi*y)^2"), 1.0, 4);
  REQUIRE(v.accepted());
  const KolokoltsovSphereMetric& m = *v.metric;
  CHECK(m.smoothness_order() == 4);
  const auto bps = m.branch_points();
  CHECK(bps[0][0] == 0.0);
  CHECK(bps[3][0] == 0.5);
  CHECK(bps[3][1] == 0.5);
  CHECK_THROWS_AS(m.lambda_jet(0.5 + 1e-10, 0.0), BranchPointError);
  CHECK_THROWS_AS(m.lambda_jet(1.0 - 1e-9, 1e-9), BranchPointError);
  CHECK(m.lambda(0.25, 0.25) == doctest::Approx(2.0));
  // K vanishes identically along y = 0: (f'' f - f'^2) + h''(0) f = 0 for sin^2
  for (double x : {0.1, 0.25, 0.4})
    CHECK(gauss_curvature(m, x, 0.0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("Kolokoltsov validation rejections name the violated condition") {
  // no zeros at all
  auto v1 = validate_kolokoltsov(parse_expr("2+cos(2*pi*x)"),
                                 parse_expr("sin(2*pi*y)^2"), 1.0, 2);
  CHECK_FALSE(v1.accepted());
  CHECK(v1.violated_condition == 1);
  // unequal second derivatives at the zeros
  auto v2 = validate_kolokoltsov(parse_expr("sin(2*pi*x)^2"),
                                 parse_expr("2*sin(2*pi*y)^2"), 1.0, 2);
  CHECK_FALSE(v2.accepted());
  CHECK(v2.violated_condition == 2);
  // not even
  auto v3 = validate_kolokoltsov(
      parse_expr("sin(2*pi*x)^2"),
      parse_expr("sin(2*pi*y)^2*(1+sin(2*pi*y)/2)"), 1.0, 2);
  CHECK_FALSE(v3.accepted());
  CHECK(v3.violated_condition == 3);
  // Taylor mismatch appears only at order 4, so k = 0 passes and k = 4 fails
  auto v4lo = validate_kolokoltsov(
      parse_expr("sin(2*pi*x)^2"),
      parse_expr("sin(2*pi*y)^2*(1+sin(2*pi*y)^2)"), 1.0, 0);
  CHECK(v4lo.accepted());
  auto v4hi = validate_kolokoltsov(
      parse_expr("sin(2*pi*x)^2"),
      parse_expr("sin(2*pi*y)^2*(1+sin(2*pi*y)^2)"), 1.0, 4);
  CHECK_FALSE(v4hi.accepted());
  CHECK(v4hi.violated_condition == 4);
}

TEST_CASE("involution image") {
  const auto a = involution_image(0.3, 0.2, 1.0);
  CHECK(a[0] == doctest::Approx(0.7));
  CHECK(a[1] == doctest::Approx(0.8));
  const auto b = involution_image(0.0, 0.0, 1.0);
  CHECK(b[0] == 0.0);
  CHECK(b[1] == 0.0);
  const auto c = involution_image(0.5, 1.0, 2.0);
  CHECK(c[0] == doctest::Approx(0.5));
  CHECK(c[1] == doctest::Approx(1.0));
}

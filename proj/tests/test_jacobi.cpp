#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "jvf/jacobi.hpp"

using namespace jvf;

namespace {

std::shared_ptr<LiouvilleTorusMetric> example_metric() {
  return std::make_shared<LiouvilleTorusMetric>(
      parse_expr("2+cos(2*pi*x)"), parse_expr("1-cos(2*pi*y)"), 1.0);
}

std::shared_ptr<ConformalChartMetric> flat_metric() {
  return std::make_shared<ConformalChartMetric>(parse_expr("1"));
}

std::shared_ptr<ConformalChartMetric> sphere_metric() {
  return std::make_shared<ConformalChartMetric>(parse_expr("4/(1+x^2+y^2)^2"));
}

}  // namespace

TEST_CASE("system (1) on the flat chart: n(t) = t, horiz linear, a constant") {
  const Trajectory tr = integrate_geodesic(flat_metric(), {0, 0, 1, 0}, 0.0, 5.0);
  const JacobiEvolution ev = integrate_jacobi_frame(tr, {0, 1, 2, 0.5});
  for (double t : {0.3, 1.7, 4.9}) {
    const JacobiFrameState s = ev.eval(t);
    CHECK(s.n == doctest::Approx(t).epsilon(1e-10));
    CHECK(s.n_dot == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.horiz == doctest::Approx(2.0 + 0.5 * t).epsilon(1e-10));
    CHECK(s.a == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("round sphere: n = sin t, first zero at pi, zeros simple") {
  const Trajectory tr = integrate_geodesic(sphere_metric(), {1, 0, 0, 1}, 0.0, 10.0);
  CHECK(tr.energy() == doctest::Approx(0.5));  // unit speed
  const JacobiEvolution ev = integrate_jacobi_frame(tr, {0, 1, 0, 0});
  for (double t : {0.5, 1.5, 2.5, 3.5, 7.0})
    CHECK(ev.eval(t).n == doctest::Approx(std::sin(t)).epsilon(1e-8));
  // first zero by bisection
  const double z = bisect([&ev](double t) { return ev.eval(t).n; }, 2.5, 3.5, 1e-10);
  CHECK(z == doctest::Approx(M_PI).epsilon(1e-6));
  CHECK(std::abs(ev.eval(z).n_dot) > 0.9);  // simple zero
}

TEST_CASE("pure tangential initial state stays tangential") {
  const Trajectory tr =
      integrate_geodesic(example_metric(), {0.1, 0.2, 1.2, 0.8}, 0.0, 4.0);
  const JacobiEvolution ev = integrate_jacobi_frame(tr, {0, 0, 1, 0});
  for (double t : {0.0, 1.3, 3.9}) {
    const JacobiFrameState s = ev.eval(t);
    CHECK(s.n == doctest::Approx(0.0));
    CHECK(s.n_dot == doctest::Approx(0.0));
    CHECK(s.horiz == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("frame evolution is linear in the initial state") {
  const Trajectory tr =
      integrate_geodesic(example_metric(), {0.3, 0.6, -0.9, 1.1}, 0.0, 3.0);
  const JacobiEvolution e1 = integrate_jacobi_frame(tr, {0.2, -1.0, 0.4, 0.1});
  const JacobiEvolution e2 = integrate_jacobi_frame(tr, {1.0, 0.5, -0.3, 0.7});
  const JacobiEvolution es = integrate_jacobi_frame(tr, {2.2, 0.0, -0.2, 1.5});
  for (double t : {0.7, 2.9}) {
    const JacobiFrameState a = e1.eval(t), b = e2.eval(t), s = es.eval(t);
    CHECK(s.n == doctest::Approx(a.n + 2 * b.n).epsilon(1e-8));
    CHECK(s.n_dot == doctest::Approx(a.n_dot + 2 * b.n_dot).epsilon(1e-8));
    CHECK(s.horiz == doctest::Approx(a.horiz + 2 * b.horiz).epsilon(1e-8));
    CHECK(s.a == doctest::Approx(a.a + 2 * b.a).epsilon(1e-10));
  }
}

TEST_CASE("normal solution agrees with the Jacobi-Hill equation directly") {
  // unit-speed trajectory on the example metric
  auto m = example_metric();
  PhasePoint p0{0.15, 0.45, 1.0, 0.4};
  const double lam = m->lambda(p0.x, p0.y);
  const double scale = std::sqrt(lam) / std::hypot(p0.px, p0.py);
  p0.px *= scale;
  p0.py *= scale;
  const Trajectory tr = integrate_geodesic(m, p0, 0.0, 10.0);
  CHECK(tr.energy() == doctest::Approx(0.5).epsilon(1e-12));
  const JacobiEvolution ev = integrate_jacobi_frame(tr, {0, 1, 0, 0});
  // direct integration of xdd + K x = 0
  const Metric& mm = *m;
  OdeSolution direct = integrate_ode(
      [&tr, &mm](double t, const Vec& s, Vec& ds) {
        const PhasePoint p = tr.eval(t);
        ds[0] = s[1];
        ds[1] = -gauss_curvature(mm, p.x, p.y) * s[0];
      },
      {0.0, 1.0}, 0.0, 10.0, 1e-10);
  for (int i = 0; i <= 40; ++i) {
    const double t = 10.0 * i / 40;
    CHECK(ev.eval(t).n == doctest::Approx(direct.eval(t)[0]).epsilon(1e-6));
  }
}

TEST_CASE("projection: norm identity and tangential case") {
  auto m = sphere_metric();
  const Trajectory tr = integrate_geodesic(m, {1, 0, 0, 1}, 0.0, 6.0);
  const JacobiEvolution ev = integrate_jacobi_frame(tr, {0.3, 0.8, 0.0, 0.6});
  auto J = project_jacobi(ev, tr);
  for (double t : {0.2, 2.1, 5.5}) {
    const auto j = J(t);
    const PhasePoint p = tr.eval(t);
    const double lam = m->lambda(p.x, p.y);
    const JacobiFrameState s = ev.eval(t);
    // |J|_g^2 = n^2 + a^2 on a unit-speed trajectory
    CHECK(lam * (j[0] * j[0] + j[1] * j[1]) ==
          doctest::Approx(s.n * s.n + s.a * s.a).epsilon(1e-8));
  }
  const JacobiEvolution et = integrate_jacobi_frame(tr, {0, 0, 0, 1});
  auto Jt = project_jacobi(et, tr);
  for (double t : {0.4, 3.3}) {
    const auto j = Jt(t);
    const auto v = tr.velocity(t);
    CHECK(j[0] == doctest::Approx(v[0]).epsilon(1e-8));
    CHECK(j[1] == doctest::Approx(v[1]).epsilon(1e-8));
  }
}

TEST_CASE("sgrad F frame coefficients satisfy system (1)") {
  auto m = example_metric();
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> pos(0.05, 0.95), mom(-1.5, 1.5);
  int done = 0;
  while (done < 20) {
    PhasePoint p0{pos(rng), pos(rng), mom(rng), mom(rng)};
    if (std::hypot(p0.px, p0.py) < 0.4) continue;
    // tight trajectory tolerance so the finite-difference truncation (~h^2)
    // dominates the residual, not the dense-output interpolation error
    const Trajectory tr = integrate_geodesic(m, p0, 0.0, 3.0, 1e-12);
    const auto field = jacobi_from_integral(tr);
    CHECK(system1_residual(field, tr, 0.2, 2.8, 120, 1e-5) < 1e-6);
    ++done;
  }
}

TEST_CASE("sgrad F is tangential along a critical circle") {
  auto m = example_metric();
  // saddle circle y = 0 of the example metric, unit momentum p_x = sqrt(f+h)
  const Trajectory tr =
      integrate_geodesic(m, {0.0, 0.0, std::sqrt(3.0), 0.0}, 0.0, 3.0);
  const auto field = jacobi_from_integral(tr);
  for (double t : {0.0, 0.9, 2.7}) {
    CHECK(std::abs(field(t).n) < 1e-9);
    CHECK(std::abs(field(t).n_dot) < 1e-9);
  }
}

TEST_CASE("alpha/beta of the frame fields D_phi and D_2") {
  auto m = example_metric();
  PhasePoint p0{0.2, 0.3, 1.1, 0.7};
  const double scale =
      std::sqrt(m->lambda(p0.x, p0.y)) / std::hypot(p0.px, p0.py);
  p0.px *= scale;
  p0.py *= scale;  // unit speed
  const Trajectory tr = integrate_geodesic(m, p0, 0.0, 2.0);
  const Metric& mm = *m;
  auto Dphi = [&tr, &mm](double t) -> Vec4 {
    return frame_vectors(mm, tr.eval(t)).dphi;
  };
  auto D2 = [&tr, &mm](double t) -> Vec4 {
    return frame_vectors(mm, tr.eval(t)).d2;
  };
  const LineFieldAB ab_phi = alpha_beta_from_Y(tr, Dphi);
  const LineFieldAB ab_2 = alpha_beta_from_Y(tr, D2);
  for (double t : {0.1, 0.8, 1.9}) {
    CHECK(ab_phi.alpha(t) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(ab_phi.beta(t) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ab_2.alpha(t) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ab_2.beta(t) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("alpha/beta are invariant under the <A, D1> projection") {
  auto m = example_metric();
  const Trajectory tr = integrate_geodesic(m, {0.4, 0.1, 0.9, -1.2}, 0.0, 2.0);
  const Metric& mm = *m;
  auto Y = [](double t) -> Vec4 {
    return {0.3 + 0.1 * t, -0.7, 0.2 * t, 1.1};
  };
  auto Yp = [&tr, &mm, &Y](double t) -> Vec4 {
    const PhasePoint p = tr.eval(t);
    FrameCoords c = frame_decompose(mm, p, Y(t));
    c.c_1 = 0;
    c.c_a = 0;
    return frame_compose(mm, p, c);
  };
  const LineFieldAB a1 = alpha_beta_from_Y(tr, Y);
  const LineFieldAB a2 = alpha_beta_from_Y(tr, Yp);
  for (double t : {0.2, 1.0, 1.8}) {
    CHECK(a1.alpha(t) == doctest::Approx(a2.alpha(t)).epsilon(1e-9));
    CHECK(a1.beta(t) == doctest::Approx(a2.beta(t)).epsilon(1e-9));
  }
}

TEST_CASE("solution_from_line_field basics") {
  const Trajectory tr = integrate_geodesic(flat_metric(), {0, 0, 1, 0}, 0.0, 2.0);
  LineFieldAB ab;
  ab.alpha = [](double) { return 1.0; };
  ab.beta = [](double) { return 0.0; };
  const LineFieldSolution s0 = solution_from_line_field(tr, ab, 0.0, 2.0);
  CHECK(s0.solution.u(1.3) == doctest::Approx(1.0).epsilon(1e-12));
  ab.beta = [](double) { return 0.7; };
  const LineFieldSolution sc = solution_from_line_field(tr, ab, 0.0, 2.0);
  CHECK(sc.solution.u(1.5) == doctest::Approx(std::exp(0.7 * 1.5)).epsilon(1e-10));
  CHECK(sc.solution.du(1.5) ==
        doctest::Approx(0.7 * std::exp(0.7 * 1.5)).epsilon(1e-10));
  // kappa = alpha(t0)/alpha(t) * u
  CHECK(sc.kappa(1.5) == doctest::Approx(sc.solution.u(1.5)).epsilon(1e-12));
  // alpha crossing aborts with the crossing time named
  ab.alpha = [](double t) { return 1.0 - t; };
  CHECK_THROWS_WITH_AS(solution_from_line_field(tr, ab, 0.0, 2.0),
                       doctest::Contains("alpha vanishes"), MetricError);
}

TEST_CASE("saddle line field reproduces the closed form along the circle") {
  auto m = example_metric();
  // y = 0 saddle circle; branch tangent Y = d_y + sqrt(h''(0)/2) d_py,
  // h = 1 - cos(2 pi y): h''(0) = 4 pi^2, c = pi sqrt(2)
  const double c = M_PI * std::sqrt(2.0);
  const Trajectory tr =
      integrate_geodesic(m, {0.0, 0.0, std::sqrt(3.0), 0.0}, 0.0, 1.2);
  auto Y = [c](double) -> Vec4 { return {0, 1, 0, c}; };
  const LineFieldAB ab = alpha_beta_from_Y(tr, Y);
  const LineFieldSolution sol = solution_from_line_field(tr, ab, 0.0, 1.2);
  CHECK(sol.max_residual < 1e-5);
  CHECK(tr.energy() == doctest::Approx(0.5));  // unit speed: lambda(0,0) = 3
  auto f = [](double x) { return 2.0 + std::cos(2 * M_PI * x); };
  // alpha = sqrt(f(x(t))) along the circle
  for (double t : {0.1, 0.6, 1.1}) {
    const double x = tr.eval(t).x;
    CHECK(ab.alpha(t) == doctest::Approx(std::sqrt(f(x))).epsilon(1e-8));
  }
  // u equals the closed form sqrt(f/f(0)) exp(c int_0^x ds/sqrt(f)) after
  // the chart reparameterization x(t)
  auto ucf = [&f, c](double x) {
    const double I =
        integrate_quad([&f](double s) { return 1.0 / std::sqrt(f(s)); }, 0.0, x,
                       1e-12);
    return std::sqrt(f(x) / f(0.0)) * std::exp(c * I);
  };
  for (double t : {0.2, 0.7, 1.15}) {
    const double x = tr.eval(t).x;
    CHECK(sol.solution.u(t) == doctest::Approx(ucf(x)).epsilon(1e-6));
  }
}

TEST_CASE("reparameterization to a general curve parameter") {
  auto m = example_metric();
  const double c = M_PI * std::sqrt(2.0);
  auto f = [](double x) { return 2.0 + std::cos(2 * M_PI * x); };
  auto Y = [c](double) -> Vec4 { return {0, 1, 0, c}; };
  // the saddle circle as a chart curve x = tau, y = 0
  ParamCurve curve{[](double tau) -> std::array<double, 4> {
    return {tau, 0.0, 1.0, 0.0};
  }};
  const ReparamSolution rs = reparam_solution(*m, curve, Y, 0.0);
  auto ucf = [&f, c](double x) {
    const double I =
        integrate_quad([&f](double s) { return 1.0 / std::sqrt(f(s)); }, 0.0, x,
                       1e-12);
    return std::sqrt(f(x) / f(0.0)) * std::exp(c * I);
  };
  for (double x : {0.15, 0.5, 0.85}) {
    CHECK(rs.solution.u(x) == doctest::Approx(ucf(x)).epsilon(1e-8));
    const double ell = integrate_quad(
        [&f](double s) { return std::sqrt(f(s)); }, 0.0, x, 1e-12);
    CHECK(rs.arc_length(x) == doctest::Approx(ell).epsilon(1e-10));
  }
  // flow-time parameterization reduces to solution_from_line_field
  const Trajectory tr =
      integrate_geodesic(m, {0.0, 0.0, std::sqrt(3.0), 0.0}, 0.0, 1.0);
  ParamCurve flow{[&tr](double t) -> std::array<double, 4> {
    const PhasePoint p = tr.eval(t);
    const auto v = tr.velocity(t);
    return {p.x, p.y, v[0], v[1]};
  }};
  const ReparamSolution rf = reparam_solution(*m, flow, Y, 0.0);
  const LineFieldSolution lf =
      solution_from_line_field(tr, alpha_beta_from_Y(tr, Y), 0.0, 1.0);
  for (double t : {0.3, 0.9})
    CHECK(rf.solution.u(t) == doctest::Approx(lf.solution.u(t)).epsilon(1e-8));
  // constant-speed reparameterization leaves u unchanged pointwise
  ParamCurve fast{[](double tau) -> std::array<double, 4> {
    return {2 * tau, 0.0, 2.0, 0.0};
  }};
  const ReparamSolution r2 = reparam_solution(*m, fast, Y, 0.0);
  for (double x : {0.2, 0.4})
    CHECK(r2.solution.u(x / 2) == doctest::Approx(rs.solution.u(x)).epsilon(1e-10));
}

TEST_CASE("Wronskian") {
  ScalarSolution s{[](double t) { return std::sin(t); },
                   [](double t) { return std::cos(t); }, SolutionParam::FlowTime};
  ScalarSolution cth{[](double t) { return std::cos(t); },
                     [](double t) { return -std::sin(t); },
                     SolutionParam::FlowTime};
  for (double t : {0.0, 1.1, 2.9})
    CHECK(wronskian(s, cth, t) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(wronskian(s, s, 1.3) == doctest::Approx(0.0));
  ScalarSolution other = cth;
  other.tag = SolutionParam::ArcLength;
  CHECK_THROWS_AS(wronskian(s, other, 0.5), MetricError);
}

TEST_CASE("Jacobi CSV output is deterministic") {
  const Trajectory tr =
      integrate_geodesic(example_metric(), {0.1, 0.2, 1.2, 0.8}, 0.0, 2.0);
  const JacobiEvolution ev = integrate_jacobi_frame(tr, {0, 1, 0, 0});
  std::ostringstream a, b;
  ev.write_csv(a, tr, 40);
  ev.write_csv(b, tr, 40);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("t,n,n_dot,horiz,a,K,residual\n", 0) == 0);
}

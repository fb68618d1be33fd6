#include "jvf/jacobi.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace jvf {

JacobiEvolution integrate_jacobi_frame(const Trajectory& traj,
                                       const JacobiFrameState& init,
                                       double tol) {
  const double r2 = 2.0 * traj.energy();
  const Metric& m = traj.metric();
  JacobiEvolution ev;
  ev.sol_ = integrate_ode(
      [&traj, &m, r2](double t, const Vec& s, Vec& ds) {
        const PhasePoint p = traj.eval(t);
        const double K = gauss_curvature(m, p.x, p.y);
        ds[0] = s[1];
        ds[1] = -r2 * K * s[0];
        ds[2] = s[3];
        ds[3] = 0.0;
      },
      {init.n, init.n_dot, init.horiz, init.a}, traj.t_begin(), traj.t_end(),
      tol);
  return ev;
}

void JacobiEvolution::write_csv(std::ostream& os, const Trajectory& traj,
                                int n_samples) const {
  os << "t,n,n_dot,horiz,a,K,residual\n";
  const double r2 = 2.0 * traj.energy();
  const double hfd = 1e-5;
  char buf[64];
  for (int i = 0; i <= n_samples; ++i) {
    const double t = t_begin() + (t_end() - t_begin()) * i / n_samples;
    const JacobiFrameState s = eval(t);
    const PhasePoint p = traj.eval(t);
    const double K = gauss_curvature(traj.metric(), p.x, p.y);
    // n'' + r^2 K n by central differences on the dense output, one-sided
    // windows shrunk at the ends of the interval
    double ta = std::max(t - hfd, t_begin()), tb = std::min(t + hfd, t_end());
    const double tm = 0.5 * (ta + tb), hw = 0.5 * (tb - ta);
    const JacobiFrameState sm = eval(tm);
    const double ndd =
        (eval(tm + hw).n_dot - eval(tm - hw).n_dot) / (2 * hw);
    const double res = std::abs(
        ndd + r2 * gauss_curvature(traj.metric(), traj.eval(tm).x, traj.eval(tm).y) * sm.n);
    const double cols[7] = {t, s.n, s.n_dot, s.horiz, s.a, K, res};
    for (int c = 0; c < 7; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", cols[c]);
      os << buf << (c < 6 ? "," : "\n");
    }
  }
}

std::function<std::array<double, 2>(double)> project_jacobi(
    const JacobiEvolution& ev, const Trajectory& traj) {
  const double r = std::sqrt(2.0 * traj.energy());
  return [&ev, &traj, r](double t) -> std::array<double, 2> {
    const JacobiFrameState s = ev.eval(t);
    const auto v = traj.velocity(t);
    // unit tangent (xdot, ydot)/r; positively oriented unit normal
    const double tx = v[0] / r, ty = v[1] / r;
    return {s.n * (-ty) + s.a * tx, s.n * tx + s.a * ty};
  };
}

std::function<JacobiFrameState(double)> jacobi_from_integral(const Trajectory& traj) {
  const LiouvilleTorusMetric* liou = traj.liouville();
  if (!liou) throw MetricError("quadratic integral requires a Liouville metric");
  return [&traj, liou](double t) -> JacobiFrameState {
    const PhasePoint p = traj.eval(t);
    const Vec4 sg = sgrad_quadratic_integral(*liou, p);
    const FrameCoords c = frame_decompose(traj.metric(), p, sg);
    return {c.c_2, c.c_phi, c.c_1, c.c_a};
  };
}

double system1_residual(const std::function<JacobiFrameState(double)>& field,
                        const Trajectory& traj, double t0, double t1,
                        int n_samples, double fd_step) {
  const double r2 = 2.0 * traj.energy();
  double worst = 0;
  for (int i = 0; i <= n_samples; ++i) {
    const double t = t0 + (t1 - t0) * i / n_samples;
    if (t - fd_step < traj.t_begin() || t + fd_step > traj.t_end()) continue;
    const JacobiFrameState s = field(t);
    const JacobiFrameState sp = field(t + fd_step), sm = field(t - fd_step);
    const double inv = 1.0 / (2 * fd_step);
    const PhasePoint p = traj.eval(t);
    const double K = gauss_curvature(traj.metric(), p.x, p.y);
    const double r1 = (sp.n - sm.n) * inv - s.n_dot;
    const double r2_ = (sp.n_dot - sm.n_dot) * inv + r2 * K * s.n;
    const double r3 = (sp.horiz - sm.horiz) * inv - s.a;
    const double r4 = (sp.a - sm.a) * inv;
    for (double r : {r1, r2_, r3, r4}) worst = std::max(worst, std::abs(r));
  }
  return worst;
}

// ---------------------------------------------------------------------------

LineFieldAB alpha_beta_from_Y(const Trajectory& traj,
                              const std::function<Vec4(double)>& Y) {
  const double r2 = 2.0 * traj.energy();
  auto alpha = [&traj, Y, r2](double t) {
    const PhasePoint p = traj.eval(t);
    const double lam = traj.metric().lambda(p.x, p.y);
    const Vec4 k = Y(t);
    const auto v = traj.velocity(t);
    return lam * (v[0] * k[1] - v[1] * k[0]) / r2;
  };
  auto beta = [&traj, Y, r2](double t) {
    const PhasePoint p = traj.eval(t);
    const LambdaJet j = traj.metric().lambda_jet(p.x, p.y);
    const Vec4 k = Y(t);
    const auto v = traj.velocity(t);
    return (j.dx * k[1] - j.dy * k[0]) / (2 * j.v) +
           (v[0] * k[3] - v[1] * k[2]) / r2;
  };
  return {alpha, beta};
}

LineFieldSolution solution_from_line_field(const Trajectory& traj,
                                           const LineFieldAB& ab, double t0,
                                           double t1, double quad_tol) {
  // abort if alpha vanishes (line field tangent to the geodesic)
  const int n_scan = 400;
  double prev = ab.alpha(t0);
  for (int i = 1; i <= n_scan; ++i) {
    const double t = t0 + (t1 - t0) * i / n_scan;
    const double a = ab.alpha(t);
    if (a == 0 || prev == 0 || (a > 0) != (prev > 0)) {
      double tz = t;
      if (a != 0 && prev != 0)
        tz = bisect([&ab](double s) { return ab.alpha(s); },
                    t0 + (t1 - t0) * (i - 1) / n_scan, t, 1e-12);
      throw MetricError("alpha vanishes near t=" + std::to_string(tz) +
                        "; line field is tangent to the geodesic");
    }
    prev = a;
  }

  // copy the callables so the returned closures do not dangle
  auto af = ab.alpha, bf = ab.beta;
  auto ratio = [af, bf](double t) { return bf(t) / af(t); };

  // cache the integral cumulatively on a grid, refine inside cells
  struct Cache {
    double t0, t1;
    std::vector<double> acc;  // acc[i] = int_{t0}^{t0 + i dt}
    std::function<double(double)> ratio;
    double tol;
    double integral(double t) const {
      const int n = static_cast<int>(acc.size()) - 1;
      const double dt = (t1 - t0) / n;
      int i = std::min(n - 1, std::max(0, static_cast<int>((t - t0) / dt)));
      return acc[i] + integrate_quad(ratio, t0 + i * dt, t, tol);
    }
  };
  auto cache = std::make_shared<Cache>();
  cache->t0 = t0;
  cache->t1 = t1;
  cache->ratio = ratio;
  cache->tol = quad_tol;
  const int n_cells = 64;
  cache->acc.resize(n_cells + 1);
  cache->acc[0] = 0;
  for (int i = 0; i < n_cells; ++i)
    cache->acc[i + 1] = cache->acc[i] +
                        integrate_quad(ratio, t0 + (t1 - t0) * i / n_cells,
                                       t0 + (t1 - t0) * (i + 1) / n_cells, quad_tol);

  LineFieldSolution out;
  out.solution.tag = SolutionParam::FlowTime;
  out.solution.u = [cache](double t) { return std::exp(cache->integral(t)); };
  out.solution.du = [cache, ratio](double t) {
    return ratio(t) * std::exp(cache->integral(t));
  };
  const double a0 = af(t0);
  out.kappa = [a0, af, cache](double t) {
    return a0 / af(t) * std::exp(cache->integral(t));
  };

  // residual certificate u'' + r^2 K u on an interior sample
  const double r2 = 2.0 * traj.energy();
  const double hfd = 1e-4;
  double worst = 0;
  for (int i = 1; i < 64; ++i) {
    const double t = t0 + (t1 - t0) * i / 64.0;
    if (t - hfd < t0 || t + hfd > t1) continue;
    const double upp = (out.solution.u(t + hfd) - 2 * out.solution.u(t) +
                        out.solution.u(t - hfd)) /
                       (hfd * hfd);
    const PhasePoint p = traj.eval(t);
    const double K = gauss_curvature(traj.metric(), p.x, p.y);
    const double force = r2 * K * out.solution.u(t);
    worst = std::max(worst, std::abs(upp + force) / (1 + std::abs(force)));
  }
  out.max_residual = worst;
  return out;
}

// ---------------------------------------------------------------------------

ReparamSolution reparam_solution(const Metric& m, const ParamCurve& curve,
                                 const std::function<Vec4(double)>& Y,
                                 double tau0, double r, double quad_tol) {
  auto speed_g = [&m, &curve](double tau) {
    const auto c = curve.eval(tau);
    return std::sqrt(m.lambda(c[0], c[1])) * std::hypot(c[2], c[3]);
  };
  // beta/alpha * |dgamma/dtau|_g, the integrand of ln u in the curve parameter
  auto integrand = [&m, &curve, Y, r](double tau) {
    const auto c = curve.eval(tau);
    const LambdaJet j = m.lambda_jet(c[0], c[1]);
    const Vec4 k = Y(tau);
    const double sg = std::sqrt(j.v) * std::hypot(c[2], c[3]);
    const double r2 = r * r;
    const double alpha = j.v * (c[2] * k[1] - c[3] * k[0]) / (r2 * sg);
    const double beta = (j.dx * k[1] - j.dy * k[0]) / (2 * j.v) +
                        (c[2] * k[3] - c[3] * k[2]) / (r2 * sg);
    if (alpha == 0) throw MetricError("alpha vanishes; cannot reparameterize");
    return beta / alpha * sg;
  };

  ReparamSolution out;
  out.solution.tag = SolutionParam::ChartParam;
  out.solution.u = [integrand, tau0, quad_tol](double tau) {
    return std::exp(integrate_quad(integrand, tau0, tau, quad_tol));
  };
  auto uref = out.solution.u;
  out.solution.du = [integrand, uref](double tau) {
    return integrand(tau) * uref(tau);
  };
  out.arc_length = [speed_g, tau0, quad_tol](double tau) {
    return integrate_quad(speed_g, tau0, tau, quad_tol);
  };
  return out;
}

double wronskian(const ScalarSolution& u1, const ScalarSolution& u2, double t) {
  if (u1.tag != u2.tag)
    throw MetricError("Wronskian requires solutions in the same parameter");
  return u1.u(t) * u2.du(t) - u2.u(t) * u1.du(t);
}

}  // namespace jvf

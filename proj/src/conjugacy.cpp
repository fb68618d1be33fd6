#include "jvf/conjugacy.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace jvf {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ConjugateReport find_conjugate_points(const Trajectory& traj, double t_a,
                                      double window, double tol) {
  if (t_a < traj.t_begin() - 1e-12 || t_a + window > traj.t_end() + 1e-12)
    throw MetricError("conjugate scan window exceeds the trajectory domain");
  const double r2 = 2.0 * traj.energy();
  const Metric& m = traj.metric();
  OdeSolution sol = integrate_ode(
      [&traj, &m, r2](double t, const Vec& s, Vec& ds) {
        const PhasePoint p = traj.eval(t);
        ds[0] = s[1];
        ds[1] = -r2 * gauss_curvature(m, p.x, p.y) * s[0];
      },
      {0.0, 1.0}, t_a, t_a + window, tol);

  ConjugateReport rep;
  rep.base_time = t_a;
  const double dt = std::min(1e-2, window / 1000.0);
  const int n = static_cast<int>(std::ceil(window / dt));
  auto nval = [&sol](double t) { return sol.eval(t)[0]; };
  double tprev = t_a + window / n;  // skip the structural zero at t_a
  double vprev = nval(tprev);
  for (int i = 2; i <= n; ++i) {
    const double t = t_a + window * i / n;
    const double v = nval(t);
    if (vprev == 0.0 || (v != 0.0 && (v > 0) != (vprev > 0))) {
      const double tb = (vprev == 0.0) ? tprev : bisect(nval, tprev, t, 1e-10);
      const double nd = sol.eval(tb)[1];
      if (std::abs(nd) < 1e-12)
        rep.warnings.push_back("zero at t=" + fmt(tb) + " is not simple");
      rep.conjugate_times.push_back(tb);
      rep.brackets.push_back({tprev, t});
      rep.residuals.push_back(std::abs(nval(tb)));
    } else if (std::abs(v) < 1e-9 && v != 0.0) {
      rep.warnings.push_back("near-grazing |n| < 1e-9 at t=" + fmt(t) +
                             " without sign change; not counted");
    }
    tprev = t;
    vprev = v;
  }
  rep.N = static_cast<int>(rep.conjugate_times.size());
  rep.parity = (rep.N % 2 == 0) ? "even" : "odd";
  return rep;
}

ConjugateReport count_N(const Trajectory& traj, double period,
                        unsigned long long seed) {
  if (!(period > 0)) throw MetricError("period unknown or not positive");
  const double pad = 1e-6;
  if (traj.t_end() - traj.t_begin() < 2 * period)
    throw MetricError("count_N needs a trajectory covering two periods");
  ConjugateReport rep = find_conjugate_points(traj, traj.t_begin(), period + pad);
  rep.method = "jacobi-zeros";

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, period);
  for (int k = 0; k < 3; ++k) {
    const double base = traj.t_begin() + dist(rng);
    const ConjugateReport other = find_conjugate_points(traj, base, period + pad);
    if (other.N != rep.N)
      rep.warnings.push_back("N differs at base t=" + fmt(base) + ": " +
                             std::to_string(other.N) + " vs " +
                             std::to_string(rep.N));
  }
  rep.parity = (rep.N % 2 == 0) ? "even" : "odd";
  return rep;
}

ConjugateReport caustic_conjugates(const Trajectory& traj) {
  const auto field = jacobi_from_integral(traj);  // throws if not Liouville
  ConjugateReport rep;
  rep.method = "caustic";
  rep.base_time = traj.t_begin();
  const double span = traj.t_end() - traj.t_begin();
  const double dt = std::min(1e-2, span / 1000.0);
  const int n = static_cast<int>(std::ceil(span / dt));
  auto nf = [&field](double t) { return field(t).n; };
  double vmax = 0;
  for (int i = 0; i <= n; ++i)
    vmax = std::max(vmax, std::abs(nf(traj.t_begin() + span * i / n)));
  if (vmax < 1e-8)
    throw MetricError(
        "sgrad F is identically tangential along this trajectory (critical "
        "torus); the caustic construction does not apply");
  double tprev = traj.t_begin();
  double vprev = nf(tprev);
  for (int i = 1; i <= n; ++i) {
    const double t = traj.t_begin() + span * i / n;
    const double v = nf(t);
    if (vprev == 0.0 || (v != 0.0 && (v > 0) != (vprev > 0))) {
      const double tb = (vprev == 0.0) ? tprev : bisect(nf, tprev, t, 1e-10);
      rep.conjugate_times.push_back(tb);
      rep.brackets.push_back({tprev, t});
      rep.residuals.push_back(std::abs(nf(tb)));
    }
    tprev = t;
    vprev = v;
  }
  rep.N = static_cast<int>(rep.conjugate_times.size());
  rep.parity = "n/a";
  return rep;
}

// ---------------------------------------------------------------------------

SphereConjugate solve_conjugate_sphere(const KolokoltsovSphereMetric& m,
                                       double x1, bool require_hyperbolic) {
  if (!(x1 > 0 && x1 < 0.5))
    throw MetricError("x1 must lie in I_f^+ = (0, 1/2)");
  const FundamentalSolution fs = fundamental_solution_sphere(m, require_hyperbolic);
  SphereConjugate out;
  out.x1 = x1;
  out.hyperbolic = fs.hyperbolic;

  const SolutionSegment& seg1 = fs.segments[0];
  const SolutionSegment& seg3 = fs.segments[2];
  const double s1 = seg1.arc(x1);
  const double s_lo = fs.segments[0].length + fs.segments[1].length;
  const double len3 = seg3.length;

  // regularized conjugate-point equation: both sides through the segment
  // closed forms (exp(c I(x)) = u_plus(x)/sqrt(g(x))); the raw denominator
  // vanishes like f(x), so its renormalized limit is lim Den(x)/f(x)
  const SolutionSegment& seg2 = fs.segments[1];
  auto fx = [&m](double x) { return m.f(x); };
  auto hy = [&m](double y) { return m.h(y); };
  const double L2 = m.period_y() / 2;
  const double lhs = richardson2(
      [&](double d) { return hy(d) * seg2.u_plus(L2 - d) / seg2.u_plus(d); },
      3e-3);
  const double num = richardson2(
      [&](double d) {
        return std::sqrt(fx(d)) * seg1.u_plus(0.5 - d) /
               std::sqrt(fx(0.5 - d)) * std::sqrt(fx(x1)) / seg1.u_plus(x1);
      },
      3e-3);
  auto den_at = [&](double x2) {
    return richardson2(
        [&](double d) {
          return seg1.u_plus(d) / fx(d) * std::sqrt(fx(x2)) / seg1.u_plus(x2);
        },
        3e-3);
  };
  auto eq_res = [&](double x2) { return lhs - num / den_at(x2); };

  // direct zero of the solution vanishing at x1, continued forward through
  // I_h^+ and backward through I_h^-; forward continuation is preferred
  auto scan = [&](const std::function<double(double)>& z) {
    const double pad = 1e-8 * len3;
    const int n = 2000;
    double sprev = s_lo + pad, vprev = z(sprev);
    for (int i = 1; i <= n; ++i) {
      const double s = s_lo + pad + (len3 - 2 * pad) * i / n;
      const double v = z(s);
      if (vprev == 0.0) return sprev;
      if (v != 0.0 && (v > 0) != (vprev > 0)) return bisect(z, sprev, s, 1e-10);
      sprev = s;
      vprev = v;
    }
    return -1.0;
  };
  const GluedSolution gf = glue_solution(fs, s1, 0.0, 1.0);
  double s2 = scan(gf.u);
  std::string direction = "forward";
  if (s2 < 0) {
    // seam in I_f^- itself makes its left part the backward continuation
    // from I_f^+; combine two basis solutions to vanish at s1
    const GluedSolution p = glue_solution(fs, s_lo + 0.5 * len3, 1.0, 0.0);
    const GluedSolution q = glue_solution(fs, s_lo + 0.5 * len3, 0.0, 1.0);
    const double pa = p.u(s1), qa = q.u(s1);
    s2 = scan([&](double s) { return qa * p.u(s) - pa * q.u(s); });
    direction = "backward";
  }

  std::ostringstream os;
  if (s2 >= 0) {
    out.found = true;
    out.arc_s = s2;
    const double target = s2 - s_lo;
    out.chart_w = bisect(
        [&seg3, target](double w) { return seg3.arc(w) - target; }, seg3.a,
        seg3.b, 1e-12);
    out.x2 = out.chart_w - 0.5;
    out.residual = std::abs(eq_res(out.x2)) / (1 + std::abs(lhs));
    os << "zero of the " << direction
       << " continuation at arc s=" << fmt(s2)
       << ", chart x=" << fmt(out.chart_w) << "; ";
  } else {
    // no zero of the continued solution; fall back to the root of the
    // regularized equation, whose existence the root bracket guarantees
    out.found = false;
    const double eps = 1e-5;
    if (eq_res(eps) * eq_res(0.5 - eps) < 0) {
      out.x2 = bisect(eq_res, eps, 0.5 - eps, 1e-10);
      out.chart_w = 0.5 + out.x2;
      out.arc_s = s_lo + seg3.arc(out.chart_w);
      out.residual = std::abs(eq_res(out.x2)) / (1 + std::abs(lhs));
      os << "no zero of the continued solution in I_f^- (existence is not "
            "asserted); x2 is the root of the regularized conjugate-point "
            "equation; ";
    } else {
      out.report =
          "no zero of the glued solution found in I_f^- and the regularized "
          "equation has no bracketed root; existence is not asserted. " +
          fs.report;
      return out;
    }
  }
  os << fs.report;
  out.report = os.str();
  return out;
}

void ConjugateReport::write_json(std::ostream& os) const {
  os << "{\n  \"base_time\": " << fmt(base_time) << ",\n  \"method\": \""
     << method << "\",\n  \"N\": " << N << ",\n  \"parity\": \"" << parity
     << "\",\n  \"conjugate_times\": [";
  for (size_t i = 0; i < conjugate_times.size(); ++i)
    os << (i ? ", " : "") << fmt(conjugate_times[i]);
  os << "],\n  \"brackets\": [";
  for (size_t i = 0; i < brackets.size(); ++i)
    os << (i ? ", " : "") << "[" << fmt(brackets[i][0]) << ", "
       << fmt(brackets[i][1]) << "]";
  os << "],\n  \"residuals\": [";
  for (size_t i = 0; i < residuals.size(); ++i)
    os << (i ? ", " : "") << fmt(residuals[i]);
  os << "],\n  \"warnings\": [";
  for (size_t i = 0; i < warnings.size(); ++i) {
    os << (i ? ", " : "") << "\"";
    for (char ch : warnings[i]) {
      if (ch == '"' || ch == '\\') os << '\\';
      os << ch;
    }
    os << "\"";
  }
  os << "]\n}\n";
}

}  // namespace jvf

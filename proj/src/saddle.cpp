#include "jvf/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace jvf {

namespace {

// critical points of a periodic profile by sign-change scan + bisection
std::vector<double> critical_points(const std::function<double(double)>& d1,
                                    const std::function<double(double)>& d2,
                                    double period, const char* name) {
  const int n = 4096;
  std::vector<double> out;
  double prev = d1(0.0);
  for (int i = 1; i <= n; ++i) {
    const double t = period * i / n;
    const double cur = d1(t);
    double root = -1;
    if (prev == 0.0) {
      root = period * (i - 1) / n;
    } else if (cur != 0.0 && (cur > 0) != (prev > 0)) {
      root = bisect(d1, period * (i - 1) / n, t, 1e-13);
    }
    if (root >= 0) {
      bool dup = false;
      for (double r : out) {
        double d = std::abs(r - root);
        d = std::min(d, period - d);
        if (d < period / n / 2) dup = true;
      }
      if (!dup) {
        if (std::abs(d2(root)) <= 1e-8)
          throw MetricError(std::string(name) +
                            " has a degenerate (non-Morse) critical point at " +
                            std::to_string(root));
        out.push_back(root);
      }
    }
    prev = cur;
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Mat2 {
  double m[2][2];
};

Mat2 mul(const Mat2& A, const Mat2& B) {
  Mat2 C{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      C.m[i][j] = A.m[i][0] * B.m[0][j] + A.m[i][1] * B.m[1][j];
  return C;
}

Mat2 inv(const Mat2& A) {
  const double det = A.m[0][0] * A.m[1][1] - A.m[0][1] * A.m[1][0];
  if (std::abs(det) < 1e-300) throw OdeError("singular 2x2 state matrix");
  return {{{A.m[1][1] / det, -A.m[0][1] / det},
           {-A.m[1][0] / det, A.m[0][0] / det}}};
}

FloquetResult eigen2(const Mat2& M, double period) {
  FloquetResult out;
  out.period = period;
  const double tr = M.m[0][0] + M.m[1][1];
  const double det = M.m[0][0] * M.m[1][1] - M.m[0][1] * M.m[1][0];
  const double disc = tr * tr - 4 * det;
  if (disc >= 0) {
    const double s = std::sqrt(disc);
    out.mu1 = 0.5 * (tr + s);
    out.mu2 = 0.5 * (tr - s);
  } else {
    const double s = std::sqrt(-disc);
    out.mu1 = {0.5 * tr, 0.5 * s};
    out.mu2 = {0.5 * tr, -0.5 * s};
  }
  out.hyperbolic = disc > 1e-8 && std::abs(std::abs(out.mu1) - 1.0) > 1e-6;
  return out;
}

// the transverse profile: for YCritical circles the motion is in x with
// g(x) = f(x) + h(y0); for XCritical it is in y with g(y) = h(y) + f(x0)
struct CircleProfile {
  std::function<double(double)> g, dg;
  double period;  // 1 or L
  double c;       // sqrt(transverse second derivative / 2)
};

CircleProfile circle_profile(const LiouvilleTorusMetric& m, const SaddleCircle& c) {
  CircleProfile pr;
  if (c.family == CircleFamily::YCritical) {
    const double shift = m.h(c.position);
    pr.g = [e = m.f_expr(), shift](double x) { return e.eval(x) + shift; };
    pr.dg = [e = m.f_expr().derivative(1)](double x) { return e.eval(x); };
    pr.period = 1.0;
    pr.c = std::sqrt(std::max(0.0, m.dh(c.position, 2)) / 2.0);
  } else {
    const double shift = m.f(c.position);
    pr.g = [e = m.h_expr(), shift](double y) { return e.eval(y) + shift; };
    pr.dg = [e = m.h_expr().derivative(1)](double y) { return e.eval(y); };
    pr.period = m.period_y();
    pr.c = std::sqrt(std::max(0.0, m.df(c.position, 2)) / 2.0);
  }
  return pr;
}

SolutionSegment make_segment(std::function<double(double)> g,
                             std::function<double(double)> dg, double a,
                             double b, double c, bool singular_a,
                             bool singular_b, double quad_tol = 1e-12) {
  SolutionSegment seg;
  seg.a = a;
  seg.b = b;
  seg.c = c;
  seg.singular_a = singular_a;
  seg.singular_b = singular_b;
  const double m = 0.5 * (a + b);

  // I(w) = int_m^w dt/sqrt(g); near a singular endpoint the logarithmic part
  // (sqrt(g) ~ c|t - endpoint|) is split off analytically
  auto I = [g, a, b, c, m, singular_a, singular_b, quad_tol](double w) {
    if (w <= m && singular_a) {
      auto rem = [g, a, c](double t) {
        return 1.0 / std::sqrt(g(t)) - 1.0 / (c * (t - a));
      };
      return std::log((w - a) / (m - a)) / c + integrate_quad(rem, m, w, quad_tol);
    }
    if (w > m && singular_b) {
      auto rem = [g, b, c](double t) {
        return 1.0 / std::sqrt(g(t)) - 1.0 / (c * (b - t));
      };
      return std::log((b - m) / (b - w)) / c + integrate_quad(rem, m, w, quad_tol);
    }
    auto f = [g](double t) { return 1.0 / std::sqrt(g(t)); };
    return integrate_quad(f, m, w, quad_tol);
  };

  seg.u_plus = [g, c, I](double w) { return std::sqrt(g(w)) * std::exp(c * I(w)); };
  seg.u_minus = [g, c, I](double w) { return std::sqrt(g(w)) * std::exp(-c * I(w)); };
  // d/d(arc length): du±/dl = exp(±cI) (g'/(2g) ± c/sqrt(g))
  seg.du_plus = [g, dg, c, I](double w) {
    const double gv = g(w);
    return std::exp(c * I(w)) * (dg(w) / (2 * gv) + c / std::sqrt(gv));
  };
  seg.du_minus = [g, dg, c, I](double w) {
    const double gv = g(w);
    return std::exp(-c * I(w)) * (dg(w) / (2 * gv) - c / std::sqrt(gv));
  };
  seg.arc = [g, a, quad_tol](double w) {
    auto f = [g](double t) { return std::sqrt(g(t)); };
    return integrate_quad(f, a, w, quad_tol);
  };
  seg.length = seg.arc(b);

  // the endpoint expansions are even in the chart offset, so the even-series
  // extrapolation applies; base 3e-3 keeps the delta^6 truncation below 1e-10
  auto limit_state = [](const std::function<double(double)>& fn, bool singular,
                        double at, double toward) {
    if (!singular) return fn(at);
    const double dir = (toward > at) ? 1.0 : -1.0;
    return richardson2([&](double d) { return fn(at + dir * d); }, 3e-3);
  };
  seg.state_a[0][0] = limit_state(seg.u_plus, singular_a, a, b);
  seg.state_a[0][1] = limit_state(seg.u_minus, singular_a, a, b);
  seg.state_a[1][0] = limit_state(seg.du_plus, singular_a, a, b);
  seg.state_a[1][1] = limit_state(seg.du_minus, singular_a, a, b);
  seg.state_b[0][0] = limit_state(seg.u_plus, singular_b, b, a);
  seg.state_b[0][1] = limit_state(seg.u_minus, singular_b, b, a);
  seg.state_b[1][0] = limit_state(seg.du_plus, singular_b, b, a);
  seg.state_b[1][1] = limit_state(seg.du_minus, singular_b, b, a);

  // evaluation exactly at a singular endpoint hits 0 * inf in the closed
  // forms; snap to the limit states there
  auto guard = [a, b, singular_a, singular_b](std::function<double(double)> fn,
                                              double va, double vb) {
    const double eps = 1e-11 * (b - a);
    return [=](double w) {
      if (singular_a && w - a < eps) return va;
      if (singular_b && b - w < eps) return vb;
      return fn(w);
    };
  };
  seg.u_plus = guard(seg.u_plus, seg.state_a[0][0], seg.state_b[0][0]);
  seg.u_minus = guard(seg.u_minus, seg.state_a[0][1], seg.state_b[0][1]);
  seg.du_plus = guard(seg.du_plus, seg.state_a[1][0], seg.state_b[1][0]);
  seg.du_minus = guard(seg.du_minus, seg.state_a[1][1], seg.state_b[1][1]);
  return seg;
}

Mat2 state_mat(const std::array<std::array<double, 2>, 2>& s) {
  return {{{s[0][0], s[0][1]}, {s[1][0], s[1][1]}}};
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<SaddleCircle> enumerate_critical_circles(const LiouvilleTorusMetric& m) {
  std::vector<SaddleCircle> out;
  const auto kf = critical_points([&m](double x) { return m.df(x); },
                                  [&m](double x) { return m.df(x, 2); }, 1.0, "f");
  const auto kh = critical_points([&m](double y) { return m.dh(y); },
                                  [&m](double y) { return m.dh(y, 2); },
                                  m.period_y(), "h");
  for (double x0 : kf)
    for (int s : {+1, -1}) {
      SaddleCircle c;
      c.family = CircleFamily::XCritical;
      c.position = x0;
      c.momentum_sign = s;
      c.transverse_second_derivative = m.df(x0, 2);
      c.hyperbolic = c.transverse_second_derivative > 0;
      out.push_back(c);
    }
  for (double y0 : kh)
    for (int s : {+1, -1}) {
      SaddleCircle c;
      c.family = CircleFamily::YCritical;
      c.position = y0;
      c.momentum_sign = s;
      c.transverse_second_derivative = m.dh(y0, 2);
      c.hyperbolic = c.transverse_second_derivative > 0;
      out.push_back(c);
    }
  return out;
}

double saddle_period(const LiouvilleTorusMetric& m, const SaddleCircle& c) {
  const CircleProfile pr = circle_profile(m, c);
  return integrate_quad([&pr](double w) { return std::sqrt(pr.g(w)); }, 0.0,
                        pr.period, 1e-12);
}

Trajectory saddle_trajectory(std::shared_ptr<const LiouvilleTorusMetric> m,
                             const SaddleCircle& c, double n_periods, double tol) {
  const double T = saddle_period(*m, c);
  PhasePoint p0;
  if (c.family == CircleFamily::YCritical) {
    p0 = {0.0, c.position, c.momentum_sign * std::sqrt(m->f(0.0) + m->h(c.position)), 0.0};
  } else {
    p0 = {c.position, 0.0, 0.0, c.momentum_sign * std::sqrt(m->h(0.0) + m->f(c.position))};
  }
  return integrate_geodesic(m, p0, 0.0, n_periods * T, tol);
}

FloquetResult floquet_of_trajectory(const Trajectory& traj, double period,
                                    double tol) {
  if (traj.t_end() < traj.t_begin() + period)
    throw OdeError("trajectory shorter than one period");
  const double r2 = 2.0 * traj.energy();
  const Metric& m = traj.metric();
  auto rhs = [&traj, &m, r2](double t, const Vec& s, Vec& ds) {
    const PhasePoint p = traj.eval(t);
    ds[0] = s[1];
    ds[1] = -r2 * gauss_curvature(m, p.x, p.y) * s[0];
  };
  Mat2 M{};
  for (int col = 0; col < 2; ++col) {
    Vec y0 = {col == 0 ? 1.0 : 0.0, col == 0 ? 0.0 : 1.0};
    OdeSolution s = integrate_ode(rhs, y0, traj.t_begin(), traj.t_begin() + period, tol);
    const Vec yT = s.eval(traj.t_begin() + period);
    M.m[0][col] = yT[0];
    M.m[1][col] = yT[1];
  }
  return eigen2(M, period);
}

FloquetResult floquet_multipliers(const LiouvilleTorusMetric& m,
                                  const SaddleCircle& c) {
  auto holder = std::make_shared<LiouvilleTorusMetric>(m);
  const Trajectory traj = saddle_trajectory(holder, c, 1.0);
  return floquet_of_trajectory(traj, saddle_period(m, c));
}

// ---------------------------------------------------------------------------

SaddleLineFields line_fields_on_saddle(const Trajectory& traj,
                                       const SaddleCircle& c) {
  if (!c.hyperbolic)
    throw MetricError("line fields require a hyperbolic circle");
  const double cc = std::sqrt(c.transverse_second_derivative / 2.0);
  const Metric& m = traj.metric();
  // branch tangents: YCritical -> d_y ± cc d_py; XCritical -> d_x ± cc d_px;
  // projected onto <D2, Dphi> along <A, D1>
  const CircleFamily fam = c.family;
  auto make = [&traj, &m, fam, cc](double sign) {
    return [&traj, &m, fam, cc, sign](double t) -> Vec4 {
      Vec4 y;
      if (fam == CircleFamily::YCritical)
        y = {0, 1, 0, sign * cc};
      else
        y = {1, 0, sign * cc, 0};
      const PhasePoint p = traj.eval(t);
      FrameCoords fc = frame_decompose(m, p, y);
      fc.c_1 = 0;
      fc.c_a = 0;
      return frame_compose(m, p, fc);
    };
  };
  SaddleLineFields out;
  out.y_plus = make(+1.0);
  out.y_minus = make(-1.0);
  const double t1 = traj.t_begin() + 0.25 * (traj.t_end() - traj.t_begin());
  const LineFieldSolution sp = solution_from_line_field(
      traj, alpha_beta_from_Y(traj, out.y_plus), traj.t_begin(), t1);
  const LineFieldSolution sm = solution_from_line_field(
      traj, alpha_beta_from_Y(traj, out.y_minus), traj.t_begin(), t1);
  out.residual_plus = sp.max_residual;
  out.residual_minus = sm.max_residual;
  if (out.residual_plus > 1e-5 || out.residual_minus > 1e-5) {
    std::ostringstream os;
    os << "line-field certification failed: residuals " << out.residual_plus
       << ", " << out.residual_minus
       << " (branch-tangent candidate; the literal d_x ± (sqrt(f)/sqrt(2)) d_px"
          " candidate yields alpha = 0 along the circle and cannot be certified)";
    throw MetricError(os.str());
  }
  return out;
}

bool orientability_of_field(const Trajectory& traj, double period,
                            const std::function<Vec4(double)>& Y) {
  const Metric& m = traj.metric();
  const int n = 256;
  double prev2 = 0, prevphi = 0, sign = 1.0;
  double start2 = 0, startphi = 0;
  for (int i = 0; i <= n; ++i) {
    const double t = traj.t_begin() + period * i / n;
    const PhasePoint p = traj.eval(t);
    const FrameCoords fc = frame_decompose(m, p, Y(t));
    double v2 = fc.c_2, vphi = fc.c_phi;
    const double norm = std::hypot(v2, vphi);
    if (norm < 1e-12) throw MetricError("line field vanishes during transport");
    v2 /= norm;
    vphi /= norm;
    if (i == 0) {
      start2 = v2;
      startphi = vphi;
    } else {
      // continuity of the line: flip the representative when needed
      if (v2 * prev2 + vphi * prevphi < 0) {
        v2 = -v2;
        vphi = -vphi;
        sign = -sign;
      }
    }
    prev2 = v2;
    prevphi = vphi;
  }
  const double d = prev2 * start2 + prevphi * startphi;
  if (std::abs(d) < 0.9)
    throw MetricError("holonomy numerically ambiguous: |cos angle| < 0.9");
  return d > 0;
}

bool orientability(const Trajectory& traj, const SaddleCircle& c) {
  const auto* liou = traj.liouville();
  if (!liou) throw MetricError("orientability transport needs a Liouville metric");
  const SaddleLineFields lf = line_fields_on_saddle(traj, c);
  return orientability_of_field(traj, saddle_period(*liou, c), lf.y_plus);
}

// ---------------------------------------------------------------------------

FundamentalSolution fundamental_solution_torus(const LiouvilleTorusMetric& m,
                                               const SaddleCircle& c) {
  if (!(c.transverse_second_derivative > 0))
    throw MetricError("transverse second derivative must be positive");
  const CircleProfile pr = circle_profile(m, c);
  FundamentalSolution out;
  out.segments.push_back(
      make_segment(pr.g, pr.dg, 0.0, pr.period, pr.c, false, false));
  out.total_length = out.segments[0].length;
  out.hyperbolic = true;
  out.report = "torus saddle circle, single segment over one period";
  return out;
}

FundamentalSolution fundamental_solution_sphere(const KolokoltsovSphereMetric& m,
                                                bool require_hyperbolic) {
  const double L = m.period_y();
  FundamentalSolution out;
  const double g2 = m.df(0.0, 2);  // condition 2: common at all branch points
  const double c = std::sqrt(g2 / 2.0);
  std::function<double(double)> f = [e = m.f_expr()](double x) { return e.eval(x); };
  std::function<double(double)> fp = [e = m.f_expr().derivative(1)](double x) {
    return e.eval(x);
  };
  std::function<double(double)> h = [e = m.h_expr()](double y) { return e.eval(y); };
  std::function<double(double)> hp = [e = m.h_expr().derivative(1)](double y) {
    return e.eval(y);
  };
  // gamma_1: I_f+ (y=0), I_h+ (x=1/2), I_f- (y=L/2), I_h- (x=0)
  out.segments.push_back(make_segment(f, fp, 0.0, 0.5, c, true, true));
  out.segments.push_back(make_segment(h, hp, 0.0, L / 2, c, true, true));
  out.segments.push_back(make_segment(f, fp, 0.5, 1.0, c, true, true));
  out.segments.push_back(make_segment(h, hp, L / 2, L, c, true, true));
  for (const auto& s : out.segments) out.total_length += s.length;

  // gluing constants: matched-delta quotients of the vanishing (C11) and
  // nonvanishing (C22) solutions across each junction
  for (int i = 0; i < 4; ++i) {
    const SolutionSegment& sl = out.segments[i];
    const SolutionSegment& sr = out.segments[(i + 1) % 4];
    GluingConstants gc;
    gc.c11 = richardson2(
        [&](double d) { return sl.u_minus(sl.b - d) / sr.u_plus(sr.a + d); },
        3e-3);
    gc.c22 = richardson2(
        [&](double d) { return sl.u_plus(sl.b - d) / sr.u_minus(sr.a + d); },
        3e-3);
    out.gluing.push_back(gc);
  }

  // monodromy from the per-segment transfer matrices
  Mat2 M = {{{1, 0}, {0, 1}}};
  for (const auto& s : out.segments)
    M = mul(mul(state_mat(s.state_b), inv(state_mat(s.state_a))), M);
  const FloquetResult fl = eigen2(M, out.total_length);
  out.hyperbolic = fl.hyperbolic;
  {
    std::ostringstream os;
    os << "gamma_1 multipliers: (" << fl.mu1.real() << (fl.mu1.imag() < 0 ? "-" : "+")
       << std::abs(fl.mu1.imag()) << "i, " << fl.mu2.real()
       << (fl.mu2.imag() < 0 ? "-" : "+") << std::abs(fl.mu2.imag()) << "i); "
       << (out.hyperbolic ? "hyperbolic" : "NOT hyperbolic");
    out.report = os.str();
  }
  if (require_hyperbolic && !out.hyperbolic)
    throw MetricError("gamma_1 is not hyperbolic: " + out.report);
  return out;
}

FloquetResult floquet_multipliers(const KolokoltsovSphereMetric& m) {
  const FundamentalSolution fs = fundamental_solution_sphere(m, false);
  Mat2 M = {{{1, 0}, {0, 1}}};
  for (const auto& s : fs.segments)
    M = mul(mul(state_mat(s.state_b), inv(state_mat(s.state_a))), M);
  return eigen2(M, fs.total_length);
}

// ---------------------------------------------------------------------------

GluedSolution glue_solution(const FundamentalSolution& fs, double s0, double u0,
                            double du0) {
  const int n = static_cast<int>(fs.segments.size());
  GluedSolution gs;
  gs.total_length = fs.total_length;
  double acc = 0;
  for (const auto& s : fs.segments) {
    gs.segment_starts.push_back(acc);
    acc += s.length;
  }

  // locate the segment containing s0 and its coefficient pair, then propagate
  // the state across junctions in both directions
  int i0 = n - 1;
  for (int i = 0; i < n; ++i)
    if (s0 < gs.segment_starts[i] + fs.segments[i].length + 1e-15) {
      i0 = i;
      break;
    }
  gs.seam = gs.segment_starts[i0];
  const SolutionSegment& seg0 = fs.segments[i0];
  const double w0 = bisect(
      [&seg0, &gs, i0, s0](double w) { return seg0.arc(w) - (s0 - gs.segment_starts[i0]); },
      seg0.a, seg0.b, 1e-13);
  Mat2 S0 = {{{seg0.u_plus(w0), seg0.u_minus(w0)},
              {seg0.du_plus(w0), seg0.du_minus(w0)}}};
  Mat2 S0i = inv(S0);
  std::vector<std::array<double, 2>> coef(n);
  coef[i0] = {S0i.m[0][0] * u0 + S0i.m[0][1] * du0,
              S0i.m[1][0] * u0 + S0i.m[1][1] * du0};
  // forward propagation
  for (int k = 1; k < n; ++k) {
    const int i = (i0 + k) % n;
    const int pi = (i0 + k - 1) % n;
    const SolutionSegment& prev = fs.segments[pi];
    const SolutionSegment& cur = fs.segments[i];
    const Mat2 Sb = state_mat(prev.state_b);
    const double st[2] = {
        Sb.m[0][0] * coef[pi][0] + Sb.m[0][1] * coef[pi][1],
        Sb.m[1][0] * coef[pi][0] + Sb.m[1][1] * coef[pi][1]};
    const Mat2 Sai = inv(state_mat(cur.state_a));
    coef[i] = {Sai.m[0][0] * st[0] + Sai.m[0][1] * st[1],
               Sai.m[1][0] * st[0] + Sai.m[1][1] * st[1]};
  }

  auto starts = gs.segment_starts;
  auto segs = std::make_shared<std::vector<SolutionSegment>>(fs.segments);
  auto coefs = std::make_shared<std::vector<std::array<double, 2>>>(coef);
  auto locate = [segs, starts](double s) {
    const int n = static_cast<int>(segs->size());
    int i = n - 1;
    for (int k = 0; k < n; ++k)
      if (s < starts[k] + (*segs)[k].length + 1e-15) {
        i = k;
        break;
      }
    const SolutionSegment& sg = (*segs)[i];
    const double target = std::min(std::max(s - starts[i], 0.0), sg.length);
    const double w = bisect([&sg, target](double w) { return sg.arc(w) - target; },
                            sg.a, sg.b, 1e-13);
    return std::pair<int, double>(i, w);
  };
  gs.u = [segs, coefs, locate](double s) {
    const auto [i, w] = locate(s);
    return (*coefs)[i][0] * (*segs)[i].u_plus(w) +
           (*coefs)[i][1] * (*segs)[i].u_minus(w);
  };
  gs.du = [segs, coefs, locate](double s) {
    const auto [i, w] = locate(s);
    return (*coefs)[i][0] * (*segs)[i].du_plus(w) +
           (*coefs)[i][1] * (*segs)[i].du_minus(w);
  };
  return gs;
}

double junction_mismatch(const FundamentalSolution& fs, const GluedSolution& gs) {
  const int n = static_cast<int>(fs.segments.size());
  double worst = 0;
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    acc += fs.segments[i].length;
    const double sj = std::min(acc, gs.total_length);
    // the seam junction carries the monodromy of gamma_1, not a continuation
    const double ds = std::min(std::abs(std::fmod(sj, gs.total_length) - gs.seam),
                               std::abs(sj - gs.seam));
    if (ds < 1e-12) continue;
    // one-sided limits in arc length from both sides; u has a linear term in
    // the arc distance, so the general (non-even) extrapolation is required
    const double ul = richardson1([&gs, sj](double d) { return gs.u(sj - d); }, 1e-3);
    const double ur = richardson1(
        [&gs, sj](double d) { return gs.u(std::fmod(sj + d, gs.total_length)); },
        1e-3);
    const double dl = richardson1([&gs, sj](double d) { return gs.du(sj - d); }, 1e-3);
    const double dr = richardson1(
        [&gs, sj](double d) { return gs.du(std::fmod(sj + d, gs.total_length)); },
        1e-3);
    const double scale = 1 + std::abs(ul) + std::abs(dl);
    worst = std::max(worst, std::abs(ur - ul) / scale);
    worst = std::max(worst, std::abs(dr - dl) / scale);
  }
  return worst;
}

void FundamentalSolution::write_json(std::ostream& os, int n_samples) const {
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << "{\n  \"hyperbolic\": " << (hyperbolic ? "true" : "false")
     << ",\n  \"total_length\": " << num(total_length) << ",\n  \"report\": \"";
  for (char ch : report) {
    if (ch == '"' || ch == '\\') os << '\\';
    os << ch;
  }
  os << "\",\n  \"segments\": [\n";
  for (size_t i = 0; i < segments.size(); ++i) {
    const SolutionSegment& s = segments[i];
    os << "    {\"a\": " << num(s.a) << ", \"b\": " << num(s.b)
       << ", \"length\": " << num(s.length) << ", \"c\": " << num(s.c)
       << ", \"samples\": [";
    for (int k = 0; k <= n_samples; ++k) {
      // keep clear of singular endpoints
      const double pad = (s.singular_a || s.singular_b) ? 1e-6 : 0.0;
      const double w = (s.a + pad) + ((s.b - pad) - (s.a + pad)) * k / n_samples;
      os << (k ? ", " : "") << "[" << num(w) << ", " << num(s.u_plus(w)) << ", "
         << num(s.u_minus(w)) << "]";
    }
    os << "]}" << (i + 1 < segments.size() ? "," : "") << "\n";
  }
  os << "  ],\n  \"gluing\": [";
  for (size_t i = 0; i < gluing.size(); ++i)
    os << (i ? ", " : "") << "{\"C11\": " << num(gluing[i].c11)
       << ", \"C22\": " << num(gluing[i].c22) << "}";
  os << "]\n}\n";
}

}  // namespace jvf

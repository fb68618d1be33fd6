#include "jvf/phase_flow.hpp"

#include <cmath>
#include <cstdio>

namespace jvf {

double hamiltonian(const Metric& m, const PhasePoint& p) {
  const double lam = m.lambda(p.x, p.y);
  if (!(lam > 0)) throw MetricError("lambda must be positive");
  return (p.px * p.px + p.py * p.py) / (2.0 * lam);
}

double quadratic_integral(const LiouvilleTorusMetric& m, const PhasePoint& p) {
  const double f = m.f(p.x), h = m.h(p.y);
  return (h * p.px * p.px - f * p.py * p.py) / (f + h);
}

Vec4 sgrad_quadratic_integral(const LiouvilleTorusMetric& m, const PhasePoint& p) {
  const double f = m.f(p.x), h = m.h(p.y);
  const double fp = m.df(p.x), hp = m.dh(p.y);
  const double lam = f + h, p2 = p.px * p.px + p.py * p.py;
  // (F_px, F_py, -F_x, -F_y)
  return {2 * h * p.px / lam, -2 * f * p.py / lam, fp * h * p2 / (lam * lam),
          -f * hp * p2 / (lam * lam)};
}

// ---------------------------------------------------------------------------

namespace {

void hamilton_rhs(const Metric& m, double, const Vec& s, Vec& ds) {
  const LambdaJet j = m.lambda_jet(s[0], s[1]);
  const double p2 = s[2] * s[2] + s[3] * s[3];
  const double inv = 1.0 / j.v;
  ds[0] = s[2] * inv;
  ds[1] = s[3] * inv;
  const double q = 0.5 * p2 * inv * inv;
  ds[2] = q * j.dx;
  ds[3] = q * j.dy;
}

}  // namespace

Trajectory integrate_geodesic(std::shared_ptr<const Metric> m, PhasePoint p0,
                              double t0, double t1, double tol) {
  Trajectory tr;
  tr.metric_ = std::move(m);
  tr.H0_ = hamiltonian(*tr.metric_, p0);
  if (!(tr.H0_ > 0)) throw MetricError("initial energy must be positive");
  const auto* liou = dynamic_cast<const LiouvilleTorusMetric*>(tr.metric_.get());
  if (liou) {
    tr.F0_ = quadratic_integral(*liou, p0);
    tr.has_F0_ = true;
  }
  const Metric& mm = *tr.metric_;
  tr.sol_ = integrate_ode(
      [&mm](double t, const Vec& s, Vec& ds) { hamilton_rhs(mm, t, s, ds); },
      {p0.x, p0.y, p0.px, p0.py}, t0, t1, tol);

  const double tol_cons = 100.0 * tol;
  for (double t : tr.sol_.step_times()) {
    const PhasePoint p = tr.eval(t);
    const double H = hamiltonian(mm, p);
    if (std::abs(H - tr.H0_) / tr.H0_ >= tol_cons)
      throw OdeError("energy drift exceeds tolerance at t=" + std::to_string(t));
    if (liou) {
      const double F = quadratic_integral(*liou, p);
      if (std::abs(F - tr.F0_) / (1 + std::abs(tr.F0_)) >= tol_cons)
        throw OdeError("integral drift exceeds tolerance at t=" + std::to_string(t));
    }
  }
  return tr;
}

std::array<double, 2> Trajectory::velocity(double t) const {
  const PhasePoint p = eval(t);
  const double lam = metric_->lambda(p.x, p.y);
  return {p.px / lam, p.py / lam};
}

void Trajectory::write_csv(std::ostream& os, int n_samples) const {
  os << "t,x,y,p_x,p_y,H,F\n";
  const auto* liou = liouville();
  char buf[64];
  for (int i = 0; i <= n_samples; ++i) {
    const double t = t_begin() + (t_end() - t_begin()) * i / n_samples;
    const PhasePoint p = eval(t);
    const double H = hamiltonian(*metric_, p);
    const double F = liou ? quadratic_integral(*liou, p) : 0.0;
    const double cols[7] = {t, p.x, p.y, p.px, p.py, H, F};
    for (int c = 0; c < 7; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", cols[c]);
      os << buf << (c < 6 ? "," : "\n");
    }
  }
}

// ---------------------------------------------------------------------------

Frame frame_vectors(const Metric& m, const PhasePoint& p) {
  const double p2 = p.px * p.px + p.py * p.py;
  if (!(p2 > 0)) throw MetricError("frame is undefined at zero momentum");
  const LambdaJet j = m.lambda_jet(p.x, p.y);
  const double inv = 1.0 / j.v;
  const double q = 0.5 * p2 * inv * inv;
  Frame fr;
  fr.dphi = {0, 0, -p.py, p.px};
  fr.a = {0, 0, p.px, p.py};
  fr.d1 = {p.px * inv, p.py * inv, q * j.dx, q * j.dy};
  // D_2 = [D_phi, D_1], expanded from the exact coordinate expressions:
  fr.d2 = {-p.py * inv, p.px * inv, q * j.dy, -q * j.dx};
  return fr;
}

FrameCoords frame_decompose(const Metric& m, const PhasePoint& p, const Vec4& v) {
  const Frame fr = frame_vectors(m, p);
  double A[4][4], b[4];
  for (int r = 0; r < 4; ++r) {
    A[r][0] = fr.dphi[r];
    A[r][1] = fr.d1[r];
    A[r][2] = fr.d2[r];
    A[r][3] = fr.a[r];
    b[r] = v[r];
  }
  solve4(A, b);
  return {b[0], b[1], b[2], b[3]};
}

Vec4 frame_compose(const Metric& m, const PhasePoint& p, const FrameCoords& c) {
  const Frame fr = frame_vectors(m, p);
  Vec4 v;
  for (int r = 0; r < 4; ++r)
    v[r] = c.c_phi * fr.dphi[r] + c.c_1 * fr.d1[r] + c.c_2 * fr.d2[r] + c.c_a * fr.a[r];
  return v;
}

Vec4 lie_bracket_fd(const VectorField4& V, const VectorField4& W,
                    const PhasePoint& p, double eps) {
  // [V, W] = DW.V - DV.W with second-order central differences
  auto dir_deriv = [&](const VectorField4& F, const Vec4& d) -> Vec4 {
    Vec4 base = to_vec4(p), out{};
    Vec4 plus = base, minus = base;
    for (int i = 0; i < 4; ++i) {
      plus[i] = base[i] + eps * d[i];
      minus[i] = base[i] - eps * d[i];
    }
    const Vec4 fp = F(to_phase_point(plus));
    const Vec4 fm = F(to_phase_point(minus));
    for (int i = 0; i < 4; ++i) out[i] = (fp[i] - fm[i]) / (2 * eps);
    return out;
  };
  const Vec4 vp = V(p), wp = W(p);
  const Vec4 dwv = dir_deriv(W, vp), dvw = dir_deriv(V, wp);
  Vec4 out;
  for (int i = 0; i < 4; ++i) out[i] = dwv[i] - dvw[i];
  return out;
}

}  // namespace jvf

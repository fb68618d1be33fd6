#ifndef JVF_ODE_HPP
#define JVF_ODE_HPP

// Adaptive Dormand-Prince 5(4) with 4th-order dense output, adaptive
// Gauss-Kronrod 15(7) quadrature, and small root-finding helpers.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jvf {

using Vec = std::vector<double>;
using OdeRhs = std::function<void(double t, const Vec& y, Vec& dydt)>;

struct OdeError : std::runtime_error {
  explicit OdeError(const std::string& what) : std::runtime_error(what) {}
};

// One accepted step with the dopri5 continuous extension coefficients.
struct OdeStep {
  double t = 0.0, h = 0.0;
  Vec r1, r2, r3, r4, r5;  // contd5 coefficients per component
};

class OdeSolution {
 public:
  double t_begin() const { return t0_; }
  double t_end() const { return t1_; }
  std::size_t dim() const { return steps_.empty() ? 0 : steps_.front().r1.size(); }

  Vec eval(double t) const {
    const OdeStep& s = locate(t);
    const double th = (t - s.t) / s.h;
    const double th1 = 1.0 - th;
    Vec out(s.r1.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = s.r1[i] + th * (s.r2[i] + th1 * (s.r3[i] + th * (s.r4[i] + th1 * s.r5[i])));
    return out;
  }

  // Sample times of the accepted steps (useful for scans).
  std::vector<double> step_times() const {
    std::vector<double> ts;
    ts.reserve(steps_.size() + 1);
    for (const auto& s : steps_) ts.push_back(s.t);
    ts.push_back(t1_);
    return ts;
  }

  std::size_t n_steps() const { return steps_.size(); }

 private:
  friend OdeSolution integrate_ode(const OdeRhs&, Vec, double, double, double);
  const OdeStep& locate(double t) const {
    if (steps_.empty()) throw OdeError("empty solution");
    const double lo = std::min(t0_, t1_), hi = std::max(t0_, t1_);
    if (t < lo - 1e-9 || t > hi + 1e-9) throw OdeError("dense-output evaluation outside [t0, t1]");
    // binary search over monotone step starts
    std::size_t a = 0, b = steps_.size() - 1;
    const bool fwd = t1_ >= t0_;
    while (a < b) {
      std::size_t m = (a + b + 1) / 2;
      if (fwd ? (steps_[m].t <= t) : (steps_[m].t >= t)) a = m; else b = m - 1;
    }
    return steps_[a];
  }
  double t0_ = 0.0, t1_ = 0.0;
  std::vector<OdeStep> steps_;
};

// Dormand-Prince 5(4), adaptive, FSAL, with the classic dopri5 dense output.
inline OdeSolution integrate_ode(const OdeRhs& rhs, Vec y0, double t0, double t1,
                                 double tol) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                      a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static const double d1 = -12715105075.0 / 11282082432.0,
                      d3 = 87487479700.0 / 32700410799.0,
                      d4 = -10690763975.0 / 1880347072.0,
                      d5 = 701980252875.0 / 199316789632.0,
                      d6 = -1453857185.0 / 822651844.0,
                      d7 = 69997945.0 / 29380423.0;

  if (!(tol > 0)) throw OdeError("tolerance must be positive");
  const std::size_t n = y0.size();
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  OdeSolution sol;
  sol.t0_ = t0;
  sol.t1_ = t1;
  if (span == 0.0) {
    OdeStep s;
    s.t = t0; s.h = 1.0;
    s.r1 = y0; s.r2.assign(n, 0); s.r3.assign(n, 0); s.r4.assign(n, 0); s.r5.assign(n, 0);
    sol.steps_.push_back(std::move(s));
    return sol;
  }

  Vec y = y0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), ynew(n);
  rhs(t0, y, k1);
  double t = t0;
  double h = dir * std::min(span, std::max(1e-8, 0.01 * span));
  const double hmin = span * 1e-14;
  std::size_t rejects_in_row = 0;

  while (dir * (t1 - t) > 0) {
    if (std::abs(h) > std::abs(t1 - t)) h = t1 - t;
    if (std::abs(h) < hmin)
      throw OdeError("step size underflow at t=" + std::to_string(t));

    auto stage = [&](double ci, const Vec& yy, Vec& kk) { rhs(t + ci * h, yy, kk); };
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * a21 * k1[i];
    stage(c2, yt, k2);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    stage(c3, yt, k3);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    stage(c4, yt, k4);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    stage(c5, yt, k5);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    stage(1.0, yt, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    stage(1.0, ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / n);
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      OdeStep s;
      s.t = t; s.h = h;
      s.r1.resize(n); s.r2.resize(n); s.r3.resize(n); s.r4.resize(n); s.r5.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        s.r1[i] = y[i];
        s.r2[i] = ydiff;
        s.r3[i] = bspl;
        s.r4[i] = ydiff - h * k7[i] - bspl;
        s.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                       d6 * k6[i] + d7 * k7[i]);
      }
      sol.steps_.push_back(std::move(s));
      t += h;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      rejects_in_row = 0;
      const double fac = std::min(5.0, std::max(0.2, 0.9 * std::pow(err > 1e-30 ? err : 1e-30, -0.2)));
      h *= fac;
    } else {
      ++rejects_in_row;
      if (rejects_in_row > 60) throw OdeError("tolerance failure (persistent rejections)");
      h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
    }
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod 15(7) quadrature.

namespace detail {
inline void gk15(const std::function<double(double)>& f, double a, double b,
                 double& result, double& abserr) {
  static const double xk[8] = {
      0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
      0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
  static const double wk[8] = {
      0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
      0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
  static const double wg[4] = {
      0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};
  const double hc = 0.5 * (b - a), cc = 0.5 * (a + b);
  const double fc = f(cc);
  double resk = wk[7] * fc;
  double resg = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double fa = f(cc - hc * xk[j]);
    const double fb = f(cc + hc * xk[j]);
    resk += wk[j] * (fa + fb);
    if (j % 2 == 1) resg += wg[j / 2] * (fa + fb);
  }
  result = resk * hc;
  abserr = std::abs((resk - resg) * hc);
}
}  // namespace detail

inline double integrate_quad(const std::function<double(double)>& f, double a,
                             double b, double tol = 1e-10, int max_depth = 48) {
  struct Rec {
    static double go(const std::function<double(double)>& f, double a, double b,
                     double tol, int depth) {
      double r, e;
      detail::gk15(f, a, b, r, e);
      if (e <= tol * std::max(1.0, std::abs(r)) || depth <= 0) {
        if (depth <= 0 && !(e <= 1e-6 * std::max(1.0, std::abs(r))))
          throw OdeError("quadrature failed to converge");
        return r;
      }
      const double m = 0.5 * (a + b);
      return go(f, a, m, tol * 0.7, depth - 1) + go(f, m, b, tol * 0.7, depth - 1);
    }
  };
  if (a == b) return 0.0;
  return Rec::go(f, a, b, tol, max_depth);
}

// ---------------------------------------------------------------------------
// Root refinement by bisection on a bracketing interval.
inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double xtol = 1e-10, int max_iter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0) throw OdeError("bisect: interval does not bracket a root");
  for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
    const double m = 0.5 * (a + b), fm = f(m);
    if (fm == 0.0) return m;
    if (fa * fm < 0) { b = m; fb = fm; } else { a = m; fa = fm; }
  }
  return 0.5 * (a + b);
}

// Richardson extrapolation of g(delta) -> g(0) assuming error O(delta^2),
// evaluated at delta, delta/2, delta/4.
inline double richardson2(const std::function<double(double)>& g, double delta) {
  const double g1 = g(delta), g2 = g(delta / 2), g3 = g(delta / 4);
  const double r1 = (4.0 * g2 - g1) / 3.0;
  const double r2 = (4.0 * g3 - g2) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

// Polynomial extrapolation of g(delta) -> g(0) for a general smooth g
// (linear term present), evaluated at delta, delta/2, delta/4.
inline double richardson1(const std::function<double(double)>& g, double delta) {
  const double g1 = g(delta), g2 = g(delta / 2), g3 = g(delta / 4);
  return (8.0 * g3 - 6.0 * g2 + g1) / 3.0;
}

// Solve a 4x4 linear system in place (partial pivoting). Throws on singular.
inline void solve4(double A[4][4], double b[4]) {
  int piv[4] = {0, 1, 2, 3};
  for (int c = 0; c < 4; ++c) {
    int best = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(A[r][c]) > std::abs(A[best][c])) best = r;
    if (std::abs(A[best][c]) < 1e-300) throw OdeError("singular 4x4 system");
    if (best != c) {
      for (int j = 0; j < 4; ++j) std::swap(A[c][j], A[best][j]);
      std::swap(b[c], b[best]);
      std::swap(piv[c], piv[best]);
    }
    for (int r = c + 1; r < 4; ++r) {
      const double m = A[r][c] / A[c][c];
      for (int j = c; j < 4; ++j) A[r][j] -= m * A[c][j];
      b[r] -= m * b[c];
    }
  }
  for (int r = 3; r >= 0; --r) {
    double s = b[r];
    for (int j = r + 1; j < 4; ++j) s -= A[r][j] * b[j];
    b[r] = s / A[r][r];
  }
}

}  // namespace jvf

#endif  // JVF_ODE_HPP

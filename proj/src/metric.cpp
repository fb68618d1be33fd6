#include "jvf/metric.hpp"

#include <cmath>
#include <sstream>

namespace jvf {

namespace {

double wrap(double v, double period) {
  double r = std::fmod(v, period);
  if (r < 0) r += period;
  // snap the seam so that exact fixed points come out exact
  if (std::abs(r - period) < 1e-15) r = 0;
  return r;
}

// distance of v to c on a circle of the given period
double circ_dist(double v, double c, double period) {
  double d = std::abs(wrap(v - c, period));
  return std::min(d, period - d);
}

void require_single_variable(const DiffExpr& e, const char* which) {
  if (e.variable_count() > 1)
    throw MetricError(std::string(which) + " must be a function of one variable");
}

}  // namespace

double gauss_curvature(const Metric& m, double x, double y) {
  const LambdaJet j = m.lambda_jet(x, y);
  if (j.v <= 0) throw MetricError("lambda must be positive for curvature");
  const double lnxx = (j.dxx * j.v - j.dx * j.dx) / (j.v * j.v);
  const double lnyy = (j.dyy * j.v - j.dy * j.dy) / (j.v * j.v);
  return -(lnxx + lnyy) / (2.0 * j.v);
}

// ---------------------------------------------------------------------------

LiouvilleTorusMetric::LiouvilleTorusMetric(DiffExpr f, DiffExpr h, double L)
    : f_(std::move(f)), h_(std::move(h)), L_(L) {
  if (!(L > 0)) throw MetricError("L must be positive");
  require_single_variable(f_, "f");
  require_single_variable(h_, "h");
  for (int o = 0; o < 3; ++o) {
    fd_[o] = f_.derivative(o);
    hd_[o] = h_.derivative(o);
  }
  for (int i = 0; i < 64; ++i) {
    const double x = i / 64.0;
    if (std::abs(f_.eval(x + 1.0) - f_.eval(x)) >= 1e-10)
      throw MetricError("f is not 1-periodic");
    const double y = L_ * i / 64.0;
    if (std::abs(h_.eval(y + L_) - h_.eval(y)) >= 1e-10)
      throw MetricError("h is not L-periodic");
  }
  double fmin = 1e300, fmax = -1e300, hmin = 1e300, hmax = -1e300;
  for (int i = 0; i < 256; ++i) {
    const double fv = f_.eval(i / 256.0);
    const double hv = h_.eval(L_ * i / 256.0);
    fmin = std::min(fmin, fv); fmax = std::max(fmax, fv);
    hmin = std::min(hmin, hv); hmax = std::max(hmax, hv);
  }
  // positivity is a property of lambda = f + h; the saddle normalization
  // h(y0) = 0 keeps the individual summands merely bounded below
  if (!(fmin + hmin > 0)) throw MetricError("lambda = f + h is not positive");
  if (fmax - fmin < 1e-12) throw MetricError("f is constant");
  if (hmax - hmin < 1e-12) throw MetricError("h is constant");
}

LambdaJet LiouvilleTorusMetric::lambda_jet(double x, double y) const {
  LambdaJet j;
  j.v = fd_[0].eval(x) + hd_[0].eval(y);
  j.dx = fd_[1].eval(x);
  j.dy = hd_[1].eval(y);
  j.dxx = fd_[2].eval(x);
  j.dyy = hd_[2].eval(y);
  j.dxy = 0;
  return j;
}

// ---------------------------------------------------------------------------

ConformalChartMetric::ConformalChartMetric(DiffExpr lambda) : l_(std::move(lambda)) {
  lx_ = l_.derivative("x", 1);
  ly_ = l_.derivative("y", 1);
  lxx_ = lx_.derivative("x", 1);
  lxy_ = lx_.derivative("y", 1);
  lyy_ = ly_.derivative("y", 1);
}

LambdaJet ConformalChartMetric::lambda_jet(double x, double y) const {
  LambdaJet j;
  j.v = l_.eval_xy(x, y);
  if (!(j.v > 0)) throw MetricError("lambda must be positive on the chart domain");
  j.dx = lx_.eval_xy(x, y);
  j.dy = ly_.eval_xy(x, y);
  j.dxx = lxx_.eval_xy(x, y);
  j.dxy = lxy_.eval_xy(x, y);
  j.dyy = lyy_.eval_xy(x, y);
  return j;
}

// ---------------------------------------------------------------------------

LambdaJet KolokoltsovSphereMetric::lambda_jet(double x, double y) const {
  for (const auto& bp : branch_points()) {
    const double dx = circ_dist(x, bp[0], 1.0);
    const double dy = circ_dist(y, bp[1], L_);
    if (std::hypot(dx, dy) < 1e-8)
      throw BranchPointError("evaluation within 1e-8 of a branch point");
  }
  LambdaJet j;
  j.v = fd_[0].eval(x) + hd_[0].eval(y);
  j.dx = fd_[1].eval(x);
  j.dy = hd_[1].eval(y);
  j.dxx = fd_[2].eval(x);
  j.dyy = hd_[2].eval(y);
  return j;
}

KolokoltsovValidation validate_kolokoltsov(const DiffExpr& f, const DiffExpr& h,
                                           double L, int k) {
  KolokoltsovValidation out;
  auto reject = [&](int cond, const std::string& why) {
    out.violated_condition = cond;
    out.report = "condition " + std::to_string(cond) + ": " + why;
    return out;
  };
  if (!(L > 0)) return reject(1, "L must be positive");
  if (f.variable_count() > 1 || h.variable_count() > 1)
    return reject(1, "f and h must be single-variable expressions");

  DiffExpr fd[13], hd[13];
  const int max_ord = std::min(12, k + 2);  // derivative order cap
  for (int o = 0; o <= std::max(2, max_ord); ++o) {
    fd[o] = f.derivative(o);
    hd[o] = h.derivative(o);
  }

  // condition 1: nonnegative, zeros exactly at {0, 1/2} resp. {0, L/2}
  struct ZeroSpec { const DiffExpr* g; const DiffExpr* g2; double period; double z0, z1; const char* name; };
  const ZeroSpec specs[2] = {{&f, &fd[2], 1.0, 0.0, 0.5, "f"},
                             {&h, &hd[2], L, 0.0, L / 2, "h"}};
  for (const auto& sp : specs) {
    for (int i = 0; i < 1024; ++i) {
      const double t = sp.period * i / 1024.0;
      const double v = sp.g->eval(t);
      if (v < -1e-12)
        return reject(1, std::string(sp.name) + " is negative at " + std::to_string(t));
      const double dz = std::min(circ_dist(t, sp.z0, sp.period), circ_dist(t, sp.z1, sp.period));
      if (dz > sp.period / 64.0 && v <= 1e-12)
        return reject(1, std::string(sp.name) + " vanishes away from its declared zeros at " +
                             std::to_string(t));
    }
    if (std::abs(sp.g->eval(sp.z0)) > 1e-10 || std::abs(sp.g->eval(sp.z1)) > 1e-10)
      return reject(1, std::string(sp.name) + " does not vanish at its declared zeros");
    if (!(sp.g2->eval(sp.z0) > 1e-8) || !(sp.g2->eval(sp.z1) > 1e-8))
      return reject(1, std::string(sp.name) + " has a degenerate zero");
  }

  // condition 2: equal nonzero second derivatives at all four zeros
  const double d2[4] = {fd[2].eval(0.0), fd[2].eval(0.5), hd[2].eval(0.0), hd[2].eval(L / 2)};
  for (int i = 1; i < 4; ++i)
    if (std::abs(d2[i] - d2[0]) > 1e-8 * (1 + std::abs(d2[0]))) {
      std::ostringstream os;
      os << "second derivatives differ: " << d2[0] << " vs " << d2[i];
      return reject(2, os.str());
    }
  if (std::abs(d2[0]) < 1e-10) return reject(2, "second derivative vanishes");

  // condition 3: evenness on a grid
  for (int i = 0; i < 128; ++i) {
    const double x = i / 128.0;
    if (std::abs(f.eval(x) - f.eval(-x)) > 1e-10)
      return reject(3, "f(x) != f(-x)");
    const double y = L * i / 128.0;
    if (std::abs(h.eval(y) - h.eval(-y)) > 1e-10)
      return reject(3, "h(y) != h(-y)");
  }

  // C^k Taylor matching at each branch point: d^m f = (-1)^m d^m h, m <= k+2.
  const double fbase[2] = {0.0, 0.5};
  const double hbase[2] = {0.0, L / 2};
  for (double xb : fbase)
    for (double yb : hbase)
      for (int m = 1; m <= max_ord; ++m) {
        const double a = fd[m].eval(xb);
        const double b = ((m % 2) ? -1.0 : 1.0) * hd[m].eval(yb);
        if (std::abs(a - b) > 1e-8 * (1 + std::abs(a) + std::abs(b))) {
          std::ostringstream os;
          os << "Taylor mismatch at branch point (" << xb << "," << yb
             << "), order " << m << ": " << a << " vs " << b;
          return reject(4, os.str());
        }
      }

  KolokoltsovSphereMetric m;
  m.f_ = f;
  m.h_ = h;
  for (int o = 0; o < 3; ++o) {
    m.fd_[o] = fd[o];
    m.hd_[o] = hd[o];
  }
  m.L_ = L;
  m.k_ = k;
  out.metric = std::move(m);
  out.report = "accepted";
  return out;
}

std::array<double, 2> involution_image(double x, double y, double L) {
  return {wrap(-x, 1.0), wrap(-y, L)};
}

}  // namespace jvf

#ifndef JVF_METRIC_HPP
#define JVF_METRIC_HPP

// Metric families: Liouville torus metrics (f(x)+h(y))(dx^2+dy^2),
// Kolokoltsov sphere metrics in the torus double-cover chart, and generic
// conformal-chart metrics lambda(x,y)(dx^2+dy^2).

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "jvf/expr.hpp"

namespace jvf {

struct MetricError : std::runtime_error {
  explicit MetricError(const std::string& what) : std::runtime_error(what) {}
};

struct BranchPointError : MetricError {
  explicit BranchPointError(const std::string& what) : MetricError(what) {}
};

// lambda and its partials through second order.
struct LambdaJet {
  double v = 0, dx = 0, dy = 0, dxx = 0, dxy = 0, dyy = 0;
};

class Metric {
 public:
  virtual ~Metric() = default;
  virtual LambdaJet lambda_jet(double x, double y) const = 0;
  double lambda(double x, double y) const { return lambda_jet(x, y).v; }
};

// K = -Delta(ln lambda) / (2 lambda) for an isothermal metric.
double gauss_curvature(const Metric& m, double x, double y);

// ---------------------------------------------------------------------------

class LiouvilleTorusMetric : public Metric {
 public:
  // Validates periodicity, positivity and nonconstancy; throws MetricError
  // naming the violated invariant.
  LiouvilleTorusMetric(DiffExpr f, DiffExpr h, double L);

  LambdaJet lambda_jet(double x, double y) const override;

  double f(double x) const { return f_.eval(x); }
  double h(double y) const { return h_.eval(y); }
  double df(double x, int order = 1) const { return fd_[order].eval(x); }
  double dh(double y, int order = 1) const { return hd_[order].eval(y); }
  double period_y() const { return L_; }
  const DiffExpr& f_expr() const { return f_; }
  const DiffExpr& h_expr() const { return h_; }

 private:
  DiffExpr f_, h_;
  std::array<DiffExpr, 3> fd_, hd_;  // derivatives 0..2
  double L_;
};

// ---------------------------------------------------------------------------

class ConformalChartMetric : public Metric {
 public:
  explicit ConformalChartMetric(DiffExpr lambda);
  LambdaJet lambda_jet(double x, double y) const override;

 private:
  DiffExpr l_, lx_, ly_, lxx_, lxy_, lyy_;
};

// ---------------------------------------------------------------------------

struct KolokoltsovValidation;
class KolokoltsovSphereMetric;
KolokoltsovValidation validate_kolokoltsov(const DiffExpr& f, const DiffExpr& h,
                                           double L, int k);

class KolokoltsovSphereMetric : public Metric {
 public:
  LambdaJet lambda_jet(double x, double y) const override;  // refuses near branch points

  double f(double x) const { return f_.eval(x); }
  double h(double y) const { return h_.eval(y); }
  double df(double x, int order = 1) const { return fd_[order].eval(x); }
  double dh(double y, int order = 1) const { return hd_[order].eval(y); }
  double period_y() const { return L_; }
  int smoothness_order() const { return k_; }
  const DiffExpr& f_expr() const { return f_; }
  const DiffExpr& h_expr() const { return h_; }

  // The four fixed points of the involution sigma in the chart.
  std::array<std::array<double, 2>, 4> branch_points() const {
    return {{{0, 0}, {0, L_ / 2}, {0.5, 0}, {0.5, L_ / 2}}};
  }

 private:
  friend KolokoltsovValidation validate_kolokoltsov(const DiffExpr&, const DiffExpr&,
                                                    double, int);
  KolokoltsovSphereMetric() = default;
  DiffExpr f_, h_;
  std::array<DiffExpr, 3> fd_, hd_;
  double L_ = 1;
  int k_ = 0;
};

// Rejection is a value, not an exception.
struct KolokoltsovValidation {
  std::optional<KolokoltsovSphereMetric> metric;
  int violated_condition = 0;  // 1..3 per the construction, 4 = Taylor matching
  std::string report;
  bool accepted() const { return metric.has_value(); }
};

// Checks the three construction conditions and the C^k Taylor-matching
// condition d^m f/dx^m|_0 = (-1)^m d^m h/dy^m|_0 for all m <= k+2 at each
// branch point.
KolokoltsovValidation validate_kolokoltsov(const DiffExpr& f, const DiffExpr& h,
                                           double L, int k);

// sigma(x, y) = (-x, -y) reduced mod (1, L).
std::array<double, 2> involution_image(double x, double y, double L);

}  // namespace jvf

#endif  // JVF_METRIC_HPP

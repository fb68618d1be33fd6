#ifndef JVF_PHASE_FLOW_HPP
#define JVF_PHASE_FLOW_HPP

// Geodesic flow on T*P^2, the Liouville quadratic integral, and the canonical
// frame (D_phi, D_1, D_2, A) with decomposition helpers.

#include <array>
#include <functional>
#include <memory>
#include <ostream>

#include "jvf/metric.hpp"
#include "jvf/ode.hpp"

namespace jvf {

struct PhasePoint {
  double x = 0, y = 0, px = 0, py = 0;
};

using Vec4 = std::array<double, 4>;

inline Vec4 to_vec4(const PhasePoint& p) { return {p.x, p.y, p.px, p.py}; }
inline PhasePoint to_phase_point(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

double hamiltonian(const Metric& m, const PhasePoint& p);

// F = (h(y) p_x^2 - f(x) p_y^2) / (f(x) + h(y)); certified by the numeric
// Poisson-bracket oracle in the tests.
double quadratic_integral(const LiouvilleTorusMetric& m, const PhasePoint& p);
Vec4 sgrad_quadratic_integral(const LiouvilleTorusMetric& m, const PhasePoint& p);

// ---------------------------------------------------------------------------

class Trajectory {
 public:
  PhasePoint eval(double t) const { return to_phase_point_checked(sol_.eval(t)); }
  double t_begin() const { return sol_.t_begin(); }
  double t_end() const { return sol_.t_end(); }
  double energy() const { return H0_; }
  bool has_integral() const { return has_F0_; }
  double integral_value() const { return F0_; }
  const Metric& metric() const { return *metric_; }
  std::shared_ptr<const Metric> metric_ptr() const { return metric_; }
  const LiouvilleTorusMetric* liouville() const {
    return dynamic_cast<const LiouvilleTorusMetric*>(metric_.get());
  }
  std::vector<double> step_times() const { return sol_.step_times(); }

  // Chart velocity (xdot, ydot) at time t.
  std::array<double, 2> velocity(double t) const;

  // columns t, x, y, p_x, p_y, H, F (17 significant digits)
  void write_csv(std::ostream& os, int n_samples) const;

 private:
  friend Trajectory integrate_geodesic(std::shared_ptr<const Metric>, PhasePoint,
                                       double, double, double);
  static PhasePoint to_phase_point_checked(const Vec& v) {
    return {v[0], v[1], v[2], v[3]};
  }
  std::shared_ptr<const Metric> metric_;
  OdeSolution sol_;
  double H0_ = 0, F0_ = 0;
  bool has_F0_ = false;
};

// Adaptive RK5(4) on Hamilton's equations; dense output; conservation of H
// (and F, when Liouville) monitored with tol_cons = 100*tol.
Trajectory integrate_geodesic(std::shared_ptr<const Metric> m, PhasePoint p0,
                              double t0, double t1, double tol = 1e-10);

// ---------------------------------------------------------------------------

struct Frame {
  Vec4 dphi, d1, d2, a;
};

struct FrameCoords {
  double c_phi = 0, c_1 = 0, c_2 = 0, c_a = 0;
};

// Frame at a nonzero covector. D_phi = (0,0,-p_y,p_x), A = (0,0,p_x,p_y),
// D_1 = sgrad(H), D_2 = [D_phi, D_1] from the exact coordinate expressions.
Frame frame_vectors(const Metric& m, const PhasePoint& p);

FrameCoords frame_decompose(const Metric& m, const PhasePoint& p, const Vec4& v);
Vec4 frame_compose(const Metric& m, const PhasePoint& p, const FrameCoords& c);

// Second-order central-difference approximation of [V, W] = DW.V - DV.W.
using VectorField4 = std::function<Vec4(const PhasePoint&)>;
Vec4 lie_bracket_fd(const VectorField4& V, const VectorField4& W,
                    const PhasePoint& p, double eps = 1e-5);

}  // namespace jvf

#endif  // JVF_PHASE_FLOW_HPP

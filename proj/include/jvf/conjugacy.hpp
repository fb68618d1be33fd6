#ifndef JVF_CONJUGACY_HPP
#define JVF_CONJUGACY_HPP

// Conjugate-point detection by zeros of the normal Jacobi solution, N(gamma)
// counting with parity, the caustic construction, and the sphere
// conjugate-point equation along the glued circle gamma_1.

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "jvf/saddle.hpp"

namespace jvf {

struct ConjugateReport {
  double base_time = 0;
  std::vector<double> conjugate_times;
  std::vector<std::array<double, 2>> brackets;  // refined bisection brackets
  int N = 0;
  std::string parity = "n/a";  // "even" | "odd" | "n/a"
  std::string method = "jacobi-zeros";
  std::vector<std::string> warnings;
  std::vector<double> residuals;
  void write_json(std::ostream& os) const;
};

// Zeros of n(t) with n(t_a) = 0, n_dot(t_a) = 1 over (t_a, t_a + window];
// dense-output scan at step <= min(1e-2, window/1000), bisection to 1e-10.
// Near-grazing |n| < 1e-9 without a sign change is warned about, not counted.
ConjugateReport find_conjugate_points(const Trajectory& traj, double t_a,
                                      double window, double tol = 1e-10);

// N over one period from t_begin, with base-point independence checked at 3
// seeded random base points; the trajectory must cover two periods.
ConjugateReport count_N(const Trajectory& traj, double period,
                        unsigned long long seed = 12345);

// Times where the frame normal component of sgrad F vanishes; throws on a
// critical torus (sgrad F identically tangential).
ConjugateReport caustic_conjugates(const Trajectory& traj);

struct SphereConjugate {
  bool found = false;
  double x1 = 0;
  double x2 = 0;       // position inside I_f^- measured from its branch point
  double chart_w = 0;  // chart coordinate of the zero, in (1/2, 1)
  double arc_s = 0;    // global arc length of the zero along gamma_1
  double residual = 0; // regularized conjugate-equation residual
  bool hyperbolic = false;
  std::string report;
};

// Zero in I_f^- of the glued solution vanishing at x1 in I_f^+ (forward and
// backward continuations are both searched); the closed-form conjugate-point
// equation is evaluated independently with regularized limits and its
// residual reported. When the continued solution has no zero (found = false),
// x2 falls back to the root of the regularized equation; absence of the
// direct zero is reported, not asserted.
SphereConjugate solve_conjugate_sphere(const KolokoltsovSphereMetric& m,
                                       double x1,
                                       bool require_hyperbolic = true);

}  // namespace jvf

#endif  // JVF_CONJUGACY_HPP

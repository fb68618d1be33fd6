#ifndef JVF_SADDLE_HPP
#define JVF_SADDLE_HPP

// Critical circles of quadratically integrable flows, Floquet multipliers,
// invariant line fields along saddle circles, the closed-form fundamental
// solutions u±, and the glued fundamental solution along the nonsimple sphere
// circle gamma_1.

#include <complex>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "jvf/jacobi.hpp"

namespace jvf {

enum class CircleFamily { XCritical, YCritical };

struct SaddleCircle {
  CircleFamily family = CircleFamily::YCritical;
  double position = 0;  // x0 for XCritical, y0 for YCritical
  int momentum_sign = +1;
  double transverse_second_derivative = 0;  // f''(x0) resp. h''(y0)
  bool hyperbolic = false;
  bool simple = true;  // meaningful on the sphere only
  bool orientable = true;
};

// Sign-change scan (grid 4096) + bisection on f', h'; all four families with
// both momentum signs; throws MetricError on a non-Morse degeneracy.
std::vector<SaddleCircle> enumerate_critical_circles(const LiouvilleTorusMetric& m);

double saddle_period(const LiouvilleTorusMetric& m, const SaddleCircle& c);

// Unit-speed trajectory running along the circle for n_periods periods.
Trajectory saddle_trajectory(std::shared_ptr<const LiouvilleTorusMetric> m,
                             const SaddleCircle& c, double n_periods,
                             double tol = 1e-10);

struct FloquetResult {
  std::complex<double> mu1, mu2;
  double period = 0;
  bool hyperbolic = false;
};

// Eigenvalues of the (n, n_dot) monodromy over one period of a closed
// unit-speed trajectory starting at traj.t_begin().
FloquetResult floquet_of_trajectory(const Trajectory& traj, double period,
                                    double tol = 1e-10);
FloquetResult floquet_multipliers(const LiouvilleTorusMetric& m,
                                  const SaddleCircle& c);
// Monodromy of gamma_1 from the per-segment closed-form transfer matrices.
FloquetResult floquet_multipliers(const KolokoltsovSphereMetric& m);

// ---------------------------------------------------------------------------

struct SaddleLineFields {
  std::function<Vec4(double)> y_plus, y_minus;  // along the trajectory, flow time
  double residual_plus = 0, residual_minus = 0;  // certification residuals
};

// Branch tangents Y± = d_y ± sqrt(h''(y0)/2) d_py (resp. the x analogue),
// projected onto <D2, Dphi> along <A, D1>; certified through
// solution_from_line_field. Throws on elliptic input or certification failure.
SaddleLineFields line_fields_on_saddle(const Trajectory& traj,
                                       const SaddleCircle& c);

// Transports Y once around and compares directions in the <D2, Dphi> plane
// with sign-continuity tracking; throws if |cos angle| < 0.9.
bool orientability_of_field(const Trajectory& traj, double period,
                            const std::function<Vec4(double)>& Y);
bool orientability(const Trajectory& traj, const SaddleCircle& c);

// ---------------------------------------------------------------------------

struct GluingConstants {
  double c11 = 0, c22 = 0;
};

struct SolutionSegment {
  double a = 0, b = 0;    // chart-parameter interval
  double length = 0;      // arc length of the segment
  double c = 0;           // exponent sqrt(g2/2)
  bool singular_a = false, singular_b = false;  // branch-point endpoints
  std::function<double(double)> u_plus, u_minus;    // in the chart parameter
  std::function<double(double)> du_plus, du_minus;  // d/d(arc length)
  std::function<double(double)> arc;                // ell(w), 0 at a
  SolutionParam tag = SolutionParam::ChartParam;
  // limit states [[u+, u-], [u+', u-']] at the endpoints (arc-length derivative)
  std::array<std::array<double, 2>, 2> state_a{}, state_b{};
};

struct FundamentalSolution {
  std::vector<SolutionSegment> segments;
  std::vector<GluingConstants> gluing;  // sphere: junction after segment i
  bool hyperbolic = true;
  double total_length = 0;
  std::string report;
  void write_json(std::ostream& os, int n_samples) const;
};

// u±(x) = sqrt(g) exp(±c int dx/sqrt(g)) on one period of the circle.
// Throws if the transverse second derivative is <= 0.
FundamentalSolution fundamental_solution_torus(const LiouvilleTorusMetric& m,
                                               const SaddleCircle& c);

// Four segments I_f+, I_h+, I_f-, I_h- glued through the branch points; the
// gluing constants are the matched-delta Richardson limits of the quotients of
// like solutions across each junction. With require_hyperbolic the call throws
// when gamma_1 is not hyperbolic; otherwise the flag and report record it.
FundamentalSolution fundamental_solution_sphere(const KolokoltsovSphereMetric& m,
                                                bool require_hyperbolic = true);

// A single scalar solution along the glued circle in global arc length,
// determined by (u, du/dl) = (u0, du0) at s0.
struct GluedSolution {
  std::function<double(double)> u, du;
  double total_length = 0;
  std::vector<double> segment_starts;  // cumulative arc at each segment start
  // the junction carrying the monodromy defect of the circular continuation
  // (start of the base segment); all other junctions are exact continuations
  double seam = 0;
};
GluedSolution glue_solution(const FundamentalSolution& fs, double s0, double u0,
                            double du0);

// Relative C^1 mismatch of the glued solution across each junction except the
// seam (which carries the monodromy of gamma_1), estimated by polynomial
// extrapolation of both one-sided limits.
double junction_mismatch(const FundamentalSolution& fs, const GluedSolution& gs);

}  // namespace jvf

#endif  // JVF_SADDLE_HPP

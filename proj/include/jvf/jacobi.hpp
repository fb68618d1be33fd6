#ifndef JVF_JACOBI_HPP
#define JVF_JACOBI_HPP

// Jacobi fields in the invariant frame: the linear system
//   n' = n_dot,  n_dot' = -r^2 K n,  a' = 0,  horiz' = a,
// scalar solutions generated by invariant line fields via exp(int beta/alpha),
// and Wronskians.

#include <functional>
#include <ostream>
#include <string>

#include "jvf/phase_flow.hpp"

namespace jvf {

struct JacobiFrameState {
  double n = 0;       // normal component (coefficient of D_2)
  double n_dot = 0;   // coefficient of D_phi
  double horiz = 0;   // coefficient of D_1
  double a = 0;       // coefficient of A
};

class JacobiEvolution {
 public:
  JacobiFrameState eval(double t) const {
    const Vec v = sol_.eval(t);
    return {v[0], v[1], v[2], v[3]};
  }
  double t_begin() const { return sol_.t_begin(); }
  double t_end() const { return sol_.t_end(); }
  std::vector<double> step_times() const { return sol_.step_times(); }

  // columns t, n, n_dot, horiz, a, K, residual
  void write_csv(std::ostream& os, const Trajectory& traj, int n_samples) const;

 private:
  friend JacobiEvolution integrate_jacobi_frame(const Trajectory&,
                                                const JacobiFrameState&, double);
  OdeSolution sol_;
};

JacobiEvolution integrate_jacobi_frame(const Trajectory& traj,
                                       const JacobiFrameState& init,
                                       double tol = 1e-10);

// J(t) = n(t) nu(t) + a gamma_dot(t) in chart components (unit-speed
// trajectories; nu is the positively oriented unit normal).
std::function<std::array<double, 2>(double)> project_jacobi(
    const JacobiEvolution& ev, const Trajectory& traj);

// Frame coefficients of sgrad(F) along a trajectory of a Liouville metric;
// satisfies the frame system as an identity (checked by the caller/tests via
// system1_residual).
std::function<JacobiFrameState(double)> jacobi_from_integral(const Trajectory& traj);

// Max residual of the frame system on a sampled coefficient path, derivatives
// taken by central differences with the given step.
double system1_residual(const std::function<JacobiFrameState(double)>& field,
                        const Trajectory& traj, double t0, double t1,
                        int n_samples = 200, double fd_step = 1e-5);

// ---------------------------------------------------------------------------

struct LineFieldAB {
  std::function<double(double)> alpha, beta;
};

// alpha = lambda (xdot k2 - ydot k1)/r^2,
// beta  = (lambda_x k2 - lambda_y k1)/(2 lambda) + (xdot K2 - ydot K1)/r^2.
LineFieldAB alpha_beta_from_Y(const Trajectory& traj,
                              const std::function<Vec4(double)>& Y);

enum class SolutionParam { FlowTime, ChartParam, ArcLength };

struct ScalarSolution {
  std::function<double(double)> u;   // value
  std::function<double(double)> du;  // derivative in the same parameter
  SolutionParam tag = SolutionParam::FlowTime;
};

struct LineFieldSolution {
  ScalarSolution solution;                  // u(t) = exp(int beta/alpha)
  std::function<double(double)> kappa;      // alpha(t0)/alpha(t) * u(t)
  double max_residual = 0;                  // |u'' + r^2 K u| certificate
};

// Throws (naming the crossing time) if alpha changes sign on [t0, t1].
LineFieldSolution solution_from_line_field(const Trajectory& traj,
                                           const LineFieldAB& ab, double t0,
                                           double t1, double quad_tol = 1e-10);

// ---------------------------------------------------------------------------

// A regular curve tau -> (x, y, dx/dtau, dy/dtau) in the chart.
struct ParamCurve {
  std::function<std::array<double, 4>(double)> eval;
};

// Reparameterization: Y given in coordinates along the curve; the
// returned solution is in the curve parameter, with arc_length(tau) giving the
// link d ell = sqrt(lambda) |dgamma/dtau| dtau to the natural parameter.
struct ReparamSolution {
  ScalarSolution solution;                      // in the curve parameter
  std::function<double(double)> arc_length;     // ell(tau), ell(tau0) = 0
};

ReparamSolution reparam_solution(const Metric& m, const ParamCurve& curve,
                                 const std::function<Vec4(double)>& Y,
                                 double tau0, double r = 1.0,
                                 double quad_tol = 1e-10);

double wronskian(const ScalarSolution& u1, const ScalarSolution& u2, double t);

}  // namespace jvf

#endif  // JVF_JACOBI_HPP

#ifndef JVF_TOOLS_VERIFY_SUITE_HPP
#define JVF_TOOLS_VERIFY_SUITE_HPP

// Invariant suite behind the `verify` subcommand: canonical frame bracket
// relations, conservation, frame roundtrip, closed-form-vs-ODE, Wronskian and
// parity checks, adapted to the metric kind. Deterministic for a fixed seed.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jvf/conjugacy.hpp"

namespace jvf {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double value = 0;  // the measured quantity (residual, error, ...)
  double bound = 0;  // the tolerance it is held against
};

struct VerifyResult {
  std::vector<VerifyCheck> checks;
  bool ok = true;
  std::string report;
};

namespace verify_detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline PhasePoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.05, 0.95), mom(-2.0, 2.0);
  PhasePoint p{pos(rng), pos(rng), mom(rng), mom(rng)};
  if (std::hypot(p.px, p.py) < 0.3) p.px += 0.5;
  return p;
}

// max relative error of the six frame bracket relations at n random points
inline double bracket_error(const Metric& m, std::mt19937_64& rng, int n) {
  auto field = [&m](auto pick) {
    return VectorField4([&m, pick](const PhasePoint& q) -> Vec4 {
      return pick(frame_vectors(m, q));
    });
  };
  const VectorField4 Dphi = field([](const Frame& f) { return f.dphi; });
  const VectorField4 D1 = field([](const Frame& f) { return f.d1; });
  const VectorField4 D2 = field([](const Frame& f) { return f.d2; });
  const VectorField4 A = field([](const Frame& f) { return f.a; });
  double worst = 0;
  auto err = [&worst](const Vec4& got, const Vec4& want) {
    double scale = 1.0, e = 0;
    for (int k = 0; k < 4; ++k) scale = std::max(scale, std::abs(want[k]));
    for (int k = 0; k < 4; ++k) e = std::max(e, std::abs(got[k] - want[k]));
    worst = std::max(worst, e / scale);
  };
  auto scaled = [](const Vec4& v, double s) {
    Vec4 o;
    for (int k = 0; k < 4; ++k) o[k] = s * v[k];
    return o;
  };
  for (int i = 0; i < n; ++i) {
    const PhasePoint p = random_point(rng);
    const Frame fr = frame_vectors(m, p);
    const double r2 = (p.px * p.px + p.py * p.py) / m.lambda(p.x, p.y);
    const double K = gauss_curvature(m, p.x, p.y);
    err(lie_bracket_fd(Dphi, D1, p), fr.d2);
    err(lie_bracket_fd(Dphi, D2, p), scaled(fr.d1, -1.0));
    err(lie_bracket_fd(D1, D2, p), scaled(fr.dphi, r2 * K));
    err(lie_bracket_fd(A, D1, p), fr.d1);
    err(lie_bracket_fd(A, D2, p), fr.d2);
    err(lie_bracket_fd(A, Dphi, p), Vec4{0, 0, 0, 0});
  }
  return worst;
}

inline double roundtrip_error(const Metric& m, std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> comp(-2.0, 2.0);
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const PhasePoint p = random_point(rng);
    const Vec4 v{comp(rng), comp(rng), comp(rng), comp(rng)};
    const Vec4 w = frame_compose(m, p, frame_decompose(m, p, v));
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(w[k] - v[k]));
  }
  return worst;
}

// drift of H (and F, when available) along one trajectory
inline double conservation_drift(const Trajectory& tr, int samples) {
  const Metric& m = tr.metric();
  const LiouvilleTorusMetric* liou = tr.liouville();
  double worst = 0;
  for (int i = 0; i <= samples; ++i) {
    const double t =
        tr.t_begin() + (tr.t_end() - tr.t_begin()) * i / samples;
    const PhasePoint p = tr.eval(t);
    worst = std::max(worst, std::abs(hamiltonian(m, p) - tr.energy()));
    if (liou)
      worst = std::max(
          worst, std::abs(quadratic_integral(*liou, p) - tr.integral_value()));
  }
  return worst;
}

}  // namespace verify_detail

inline VerifyResult run_verify_suite(std::shared_ptr<const Metric> metric,
                                     unsigned long long seed) {
  using namespace verify_detail;
  VerifyResult res;
  std::mt19937_64 rng(seed);
  auto add = [&res](const std::string& name, double value, double bound) {
    res.checks.push_back({name, value < bound, value, bound});
  };

  add("frame-brackets", bracket_error(*metric, rng, 30), 1e-4);
  add("frame-roundtrip", roundtrip_error(*metric, rng, 50), 1e-10);

  const auto* liou = dynamic_cast<const LiouvilleTorusMetric*>(metric.get());
  const auto* sphere = dynamic_cast<const KolokoltsovSphereMetric*>(metric.get());

  {
    PhasePoint p0 = sphere ? PhasePoint{0.27, 0.31 * sphere->period_y(), 0, 0}
                           : random_point(rng);
    if (sphere) {
      p0.px = 0.8;
      p0.py = 0.6;
    }
    const double sc =
        std::sqrt(metric->lambda(p0.x, p0.y)) / std::hypot(p0.px, p0.py);
    p0.px *= sc;
    p0.py *= sc;
    const Trajectory tr = integrate_geodesic(metric, p0, 0.0, sphere ? 1.0 : 5.0);
    add("conservation-drift", conservation_drift(tr, 200), 1e-8);
  }

  if (liou) {
    const auto circles = enumerate_critical_circles(*liou);
    const SaddleCircle* sc = nullptr;
    for (const auto& c : circles)
      if (c.hyperbolic && c.momentum_sign == +1) {
        sc = &c;
        break;
      }
    if (sc) {
      const FundamentalSolution fs = fundamental_solution_torus(*liou, *sc);
      const SolutionSegment& sg = fs.segments.front();
      auto g = [&](double w) {
        return sc->family == CircleFamily::YCritical
                   ? liou->f(w) + liou->h(sc->position)
                   : liou->h(w) + liou->f(sc->position);
      };
      // closed form vs the Jacobi-Hill equation in arc length, and the
      // Wronskian constancy, sampled across the period
      double resid = 0, wdrift = 0;
      const double c2 = sg.c * sg.c;
      for (int i = 1; i < 64; ++i) {
        const double w = sg.a + (sg.b - sg.a) * i / 64.0;
        const double hfd = 1e-5;
        const double K = sc->family == CircleFamily::YCritical
                             ? gauss_curvature(*liou, w, sc->position)
                             : gauss_curvature(*liou, sc->position, w);
        const double d2u =
            (sg.du_plus(w + hfd) - sg.du_plus(w - hfd)) / (2 * hfd * std::sqrt(g(w)));
        resid = std::max(resid, std::abs(d2u + K * sg.u_plus(w)) /
                                     (1 + c2 * std::abs(sg.u_plus(w))));
        const double W =
            sg.u_plus(w) * sg.du_minus(w) - sg.u_minus(w) * sg.du_plus(w);
        wdrift = std::max(wdrift, std::abs(W + 2 * sg.c));
      }
      add("closed-form-vs-ode", resid, 1e-6);
      add("wronskian-drift", wdrift, 1e-8);

      // parity on the saddle geodesic: orientable and N even
      auto owned = std::dynamic_pointer_cast<const LiouvilleTorusMetric>(metric);
      const double T = saddle_period(*liou, *sc);
      const Trajectory str = saddle_trajectory(owned, *sc, 2.5);
      const ConjugateReport rep = count_N(str, T, seed);
      add("parity-N-even", rep.N % 2 == 0 ? 0.0 : 1.0, 0.5);
      add("saddle-orientable", orientability(str, *sc) ? 0.0 : 1.0, 0.5);
    }
  }

  if (sphere) {
    const FloquetResult fr = floquet_multipliers(*sphere);
    add("gamma1-multiplier-det", std::abs(fr.mu1 * fr.mu2 - 1.0), 1e-6);
    const FundamentalSolution fs = fundamental_solution_sphere(*sphere, false);
    const GluedSolution gs = glue_solution(fs, 0.3 * fs.segments[0].length, 1.0, 0.2);
    add("gluing-junction-mismatch", junction_mismatch(fs, gs), 1e-6);
    const SphereConjugate scj = solve_conjugate_sphere(*sphere, 0.125, false);
    add("conjugate-equation-residual", scj.residual, 1e-5);
  }

  std::ostringstream os;
  for (const VerifyCheck& c : res.checks) {
    res.ok = res.ok && c.pass;
    os << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  value="
       << fmt(c.value) << "  bound=" << fmt(c.bound) << "\n";
  }
  os << (res.ok ? "VERIFY OK" : "VERIFY FAIL") << "\n";
  res.report = os.str();
  return res;
}

}  // namespace jvf

#endif  // JVF_TOOLS_VERIFY_SUITE_HPP

// Command-line runner: configuration ingestion, scenario execution, and
// CSV/JSON artifact emission for the library.
//
// Exit codes: 0 success; 1 config/schema error; 2 numerical tolerance
// failure; 3 metric validation rejection.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "verify_suite.hpp"

using jvf::MetricError;
using json = nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key \"" + key + "\" in " + where);
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

template <typename T>
T require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key))
    throw ConfigError("missing key \"" + std::string(key) + "\" in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

struct LoadedMetric {
  std::shared_ptr<const jvf::Metric> metric;
  std::string kind;
  double L = 1.0;
};

LoadedMetric build_metric(const json& mj) {
  check_keys(mj, {"kind", "f", "h", "lambda", "L", "smoothness_k"}, "metric");
  LoadedMetric out;
  out.kind = require<std::string>(mj, "kind", "metric");
  try {
    if (out.kind == "liouville-torus") {
      out.L = get_or<double>(mj, "L", 1.0);
      out.metric = std::make_shared<jvf::LiouvilleTorusMetric>(
          jvf::parse_expr(require<std::string>(mj, "f", "metric")),
          jvf::parse_expr(require<std::string>(mj, "h", "metric")), out.L);
    } else if (out.kind == "kolokoltsov-sphere") {
      out.L = get_or<double>(mj, "L", 1.0);
      const int k = get_or<int>(mj, "smoothness_k", 2);
      const jvf::KolokoltsovValidation v = jvf::validate_kolokoltsov(
          jvf::parse_expr(require<std::string>(mj, "f", "metric")),
          jvf::parse_expr(require<std::string>(mj, "h", "metric")), out.L, k);
      if (!v.accepted()) throw ValidationError(v.report);
      out.metric = std::make_shared<jvf::KolokoltsovSphereMetric>(*v.metric);
    } else if (out.kind == "conformal-chart") {
      out.metric = std::make_shared<jvf::ConformalChartMetric>(
          jvf::parse_expr(require<std::string>(mj, "lambda", "metric")));
    } else {
      throw ConfigError("metric.kind must be liouville-torus, "
                        "kolokoltsov-sphere or conformal-chart");
    }
  } catch (const MetricError& e) {
    // constructor-level invariant violations are validation rejections
    throw ValidationError(e.what());
  }
  return out;
}

jvf::PhasePoint initial_point(const json& run) {
  const auto v = require<std::vector<double>>(run, "initial", "run");
  if (v.size() != 4)
    throw ConfigError("run.initial must be [x, y, px, py]");
  return {v[0], v[1], v[2], v[3]};
}

std::ofstream open_out(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream os(dir / name, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file " + (dir / name).string());
  return os;
}

// ---------------------------------------------------------------------------

int cmd_curvature(const LoadedMetric& lm, const json& run,
                  const std::filesystem::path& out) {
  check_keys(run, {"nx", "ny", "x_min", "x_max", "y_min", "y_max"}, "run");
  const bool chart = lm.kind == "conformal-chart";
  const int nx = get_or<int>(run, "nx", 64), ny = get_or<int>(run, "ny", 64);
  const double x0 = get_or<double>(run, "x_min", chart ? -1.0 : 0.0);
  const double x1 = get_or<double>(run, "x_max", chart ? 1.0 : 1.0);
  const double y0 = get_or<double>(run, "y_min", chart ? -1.0 : 0.0);
  const double y1 = get_or<double>(run, "y_max", chart ? 1.0 : lm.L);
  if (nx < 2 || ny < 2 || !(x1 > x0) || !(y1 > y0))
    throw ConfigError("curvature grid is empty");
  std::ofstream os = open_out(out, "curvature.csv");
  os << "x,y,K\n";
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double x = x0 + (x1 - x0) * i / (nx - 1);
      const double y = y0 + (y1 - y0) * j / (ny - 1);
      os << fmt17(x) << "," << fmt17(y) << ","
         << fmt17(jvf::gauss_curvature(*lm.metric, x, y)) << "\n";
    }
  return 0;
}

int cmd_geodesic(const LoadedMetric& lm, const json& run,
                 const std::filesystem::path& out) {
  check_keys(run, {"initial", "t_max", "tol", "samples"}, "run");
  const jvf::Trajectory tr = jvf::integrate_geodesic(
      lm.metric, initial_point(run), 0.0, require<double>(run, "t_max", "run"),
      get_or<double>(run, "tol", 1e-10));
  std::ofstream os = open_out(out, "trajectory.csv");
  tr.write_csv(os, get_or<int>(run, "samples", 1000));
  return 0;
}

int cmd_jacobi(const LoadedMetric& lm, const json& run,
               const std::filesystem::path& out) {
  check_keys(run, {"initial", "jacobi_init", "t_max", "tol", "samples"}, "run");
  const double t_max = require<double>(run, "t_max", "run");
  const double tol = get_or<double>(run, "tol", 1e-10);
  const jvf::Trajectory tr =
      jvf::integrate_geodesic(lm.metric, initial_point(run), 0.0, t_max, tol);
  const auto ji =
      get_or<std::vector<double>>(run, "jacobi_init", {0.0, 1.0, 0.0, 0.0});
  if (ji.size() != 4)
    throw ConfigError("run.jacobi_init must be [n, n_dot, horiz, a]");
  const jvf::JacobiEvolution ev =
      jvf::integrate_jacobi_frame(tr, {ji[0], ji[1], ji[2], ji[3]}, tol);
  std::ofstream os = open_out(out, "jacobi.csv");
  ev.write_csv(os, tr, get_or<int>(run, "samples", 1000));
  return 0;
}

int cmd_saddles(const LoadedMetric& lm, const json& run,
                const std::filesystem::path& out) {
  check_keys(run, {}, "run");
  const auto* liou =
      dynamic_cast<const jvf::LiouvilleTorusMetric*>(lm.metric.get());
  if (!liou)
    throw ConfigError("saddles requires a liouville-torus metric");
  const auto circles = jvf::enumerate_critical_circles(*liou);
  std::ofstream os = open_out(out, "saddles.json");
  os << "{\n  \"circles\": [\n";
  for (size_t i = 0; i < circles.size(); ++i) {
    const jvf::SaddleCircle& c = circles[i];
    os << "    {\"family\": \""
       << (c.family == jvf::CircleFamily::XCritical ? "x-critical" : "y-critical")
       << "\", \"position\": " << fmt17(c.position)
       << ", \"momentum_sign\": " << c.momentum_sign
       << ", \"transverse_second_derivative\": "
       << fmt17(c.transverse_second_derivative)
       << ", \"hyperbolic\": " << (c.hyperbolic ? "true" : "false")
       << ", \"orientable\": " << (c.orientable ? "true" : "false") << "}"
       << (i + 1 < circles.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return 0;
}

int cmd_fundamental(const LoadedMetric& lm, const json& run,
                    const std::filesystem::path& out) {
  check_keys(run, {"circle", "require_hyperbolic", "samples"}, "run");
  const int samples = get_or<int>(run, "samples", 64);
  jvf::FundamentalSolution fs;
  if (const auto* liou =
          dynamic_cast<const jvf::LiouvilleTorusMetric*>(lm.metric.get())) {
    const auto circles = jvf::enumerate_critical_circles(*liou);
    const jvf::SaddleCircle* pick = nullptr;
    if (run.contains("circle")) {
      const json& cj = run.at("circle");
      check_keys(cj, {"family", "position"}, "run.circle");
      const std::string fam = require<std::string>(cj, "family", "run.circle");
      const double pos = require<double>(cj, "position", "run.circle");
      for (const auto& c : circles)
        if (((fam == "x" && c.family == jvf::CircleFamily::XCritical) ||
             (fam == "y" && c.family == jvf::CircleFamily::YCritical)) &&
            std::abs(c.position - pos) < 1e-6 && c.momentum_sign == +1)
          pick = &c;
      if (!pick) throw ConfigError("run.circle does not match a critical circle");
    } else {
      for (const auto& c : circles)
        if (c.hyperbolic && c.momentum_sign == +1) {
          pick = &c;
          break;
        }
      if (!pick) throw MetricError("no hyperbolic circle on this metric");
    }
    fs = jvf::fundamental_solution_torus(*liou, *pick);
  } else if (const auto* sphere = dynamic_cast<const jvf::KolokoltsovSphereMetric*>(
                 lm.metric.get())) {
    fs = jvf::fundamental_solution_sphere(
        *sphere, get_or<bool>(run, "require_hyperbolic", false));
  } else {
    throw ConfigError("fundamental requires a liouville-torus or "
                      "kolokoltsov-sphere metric");
  }
  std::ofstream os = open_out(out, "fundamental.json");
  fs.write_json(os, samples);
  return 0;
}

int cmd_conjugate(const LoadedMetric& lm, const json& run,
                  const std::filesystem::path& out) {
  if (lm.kind == "kolokoltsov-sphere") {
    check_keys(run, {"x1", "require_hyperbolic"}, "run");
    const auto* sphere =
        dynamic_cast<const jvf::KolokoltsovSphereMetric*>(lm.metric.get());
    const jvf::SphereConjugate sc = jvf::solve_conjugate_sphere(
        *sphere, require<double>(run, "x1", "run"),
        get_or<bool>(run, "require_hyperbolic", true));
    std::ofstream os = open_out(out, "conjugate.json");
    os << "{\n  \"found\": " << (sc.found ? "true" : "false")
       << ",\n  \"x1\": " << fmt17(sc.x1) << ",\n  \"x2\": " << fmt17(sc.x2)
       << ",\n  \"chart_w\": " << fmt17(sc.chart_w)
       << ",\n  \"arc_s\": " << fmt17(sc.arc_s)
       << ",\n  \"residual\": " << fmt17(sc.residual)
       << ",\n  \"hyperbolic\": " << (sc.hyperbolic ? "true" : "false")
       << ",\n  \"report\": " << json(sc.report).dump() << "\n}\n";
    return 0;
  }
  check_keys(run, {"initial", "t_max", "tol", "base_time", "window", "method"},
             "run");
  const double t_max = require<double>(run, "t_max", "run");
  const jvf::Trajectory tr =
      jvf::integrate_geodesic(lm.metric, initial_point(run), 0.0, t_max,
                              get_or<double>(run, "tol", 1e-10));
  const std::string method = get_or<std::string>(run, "method", "jacobi-zeros");
  jvf::ConjugateReport rep;
  if (method == "jacobi-zeros") {
    const double base = get_or<double>(run, "base_time", 0.0);
    rep = jvf::find_conjugate_points(tr, base,
                                     get_or<double>(run, "window", t_max - base));
  } else if (method == "caustic") {
    rep = jvf::caustic_conjugates(tr);
  } else {
    throw ConfigError("run.method must be jacobi-zeros or caustic");
  }
  std::ofstream os = open_out(out, "conjugate.json");
  rep.write_json(os);
  return 0;
}

int cmd_verify(const LoadedMetric& lm, const json& run,
               const std::filesystem::path& out, unsigned long long seed_cli,
               bool seed_given) {
  check_keys(run, {"seed"}, "run");
  const unsigned long long seed =
      seed_given ? seed_cli : get_or<unsigned long long>(run, "seed", 12345ull);
  const jvf::VerifyResult vr = jvf::run_verify_suite(lm.metric, seed);
  std::fputs(vr.report.c_str(), stdout);
  std::ofstream os = open_out(out, "verify.txt");
  os << vr.report;
  return vr.ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jacobi fields of integrable geodesic flows"};
  app.require_subcommand(1);
  std::string config_path, out_override;
  unsigned long long seed = 0;
  bool seed_given = false;
  for (const char* name : {"curvature", "geodesic", "jacobi", "saddles",
                           "fundamental", "conjugate", "verify"}) {
    CLI::App* s = app.add_subcommand(name);
    s->add_option("--config", config_path, "JSON scenario config")->required();
    s->add_option("--out", out_override, "output directory override");
    s->add_option("--seed", seed, "seed for randomized checks");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }
  const CLI::App* sub = app.get_subcommands().front();
  seed_given = sub->count("--seed") > 0;
  const std::string cmd = sub->get_name();

  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot read config " + config_path);
    json cfg;
    try {
      cfg = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config parse error: ") + e.what());
    }
    check_keys(cfg, {"metric", "run", "output"}, "config");
    if (!cfg.contains("metric")) throw ConfigError("missing \"metric\" section");
    const json run = cfg.value("run", json::object());
    const json outj = cfg.value("output", json::object());
    check_keys(outj, {"directory", "formats"}, "output");

    // resolution order: --out, then the environment override, then config
    std::string dir = get_or<std::string>(outj, "directory", ".");
    if (const char* env = std::getenv("JVF_OUTPUT_DIR")) dir = env;
    if (!out_override.empty()) dir = out_override;

    const LoadedMetric lm = build_metric(cfg.at("metric"));
    if (cmd == "curvature") return cmd_curvature(lm, run, dir);
    if (cmd == "geodesic") return cmd_geodesic(lm, run, dir);
    if (cmd == "jacobi") return cmd_jacobi(lm, run, dir);
    if (cmd == "saddles") return cmd_saddles(lm, run, dir);
    if (cmd == "fundamental") return cmd_fundamental(lm, run, dir);
    if (cmd == "conjugate") return cmd_conjugate(lm, run, dir);
    if (cmd == "verify") return cmd_verify(lm, run, dir, seed, seed_given);
    throw ConfigError("unknown subcommand " + cmd);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "metric validation rejected: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }
}

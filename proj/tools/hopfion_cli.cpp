#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hopfion/effective_geometry.hpp"
#include "hopfion/geodesics.hpp"
#include "hopfion/hopf_map.hpp"
#include "hopfion/io.hpp"
#include "hopfion/scenarios.hpp"
#include "hopfion/validation.hpp"

using namespace hopfion;

namespace {

enum ExitCode { kOk = 0, kValidationFailed = 1, kUsage = 2, kDegraded = 3 };

// Bad user input discovered after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& flag) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    double v = 0.0;
    const char* first = text.data() + pos;
    const char* last = text.data() + comma;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last || !std::isfinite(v))
      throw UsageError(flag + ": cannot parse '" + text + "' as " + std::to_string(expected) +
                       " comma-separated numbers");
    out.push_back(v);
    pos = comma + 1;
  }
  if (out.size() != expected)
    throw UsageError(flag + ": expected " + std::to_string(expected) + " comma-separated numbers");
  return out;
}

Point3 parse_point(const std::string& text, const std::string& flag) {
  const auto v = parse_list(text, 3, flag);
  return {v[0], v[1], v[2]};
}

std::string fmt15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v + 0.0);  // no "-0"
  return buf;
}

void print_tensor(const Mat3& m) {
  for (int i = 0; i < 3; ++i)
    std::cout << fmt15(m(i, 0)) << " " << fmt15(m(i, 1)) << " " << fmt15(m(i, 2)) << "\n";
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_file_atomic(path, content);
}

int cmd_metric(const std::string& at, bool inverse, bool toroidal) {
  const Point3 p = parse_point(at, "--at");
  Mat3 m;
  if (toroidal) {
    const ToroidalPoint tp{p(0), p(1), p(2)};
    const Mat3 inv = inv_metric_toroidal(AnsatzConfig{}, tp).matrix();
    m = inverse ? inv : inv.inverse().eval();
  } else {
    m = inverse ? inv_metric_cartesian(p).matrix() : metric_cartesian(p).matrix();
  }
  print_tensor(m);
  return kOk;
}

int cmd_ricci(const std::string& at, const std::string& grid, bool numeric, const std::string& out) {
  if (at.empty() == grid.empty()) throw UsageError("ricci: give exactly one of --at or --grid");
  auto eval = [&](const Point3& x) { return numeric ? ricci_scalar_numeric(x) : ricci_scalar(x); };
  if (!at.empty()) {
    std::cout << format_double(eval(parse_point(at, "--at"))) << "\n";
    return kOk;
  }
  const auto g = parse_list(grid, 3, "--grid");
  const double lo = g[0], hi = g[1];
  if (g[2] != std::floor(g[2]) || g[2] < 2 || g[2] > 1001 || !(hi > lo))
    throw UsageError("--grid: expected min,max,n with min < max and integer n in [2, 1001]");
  const int n = static_cast<int>(g[2]);
  std::string csv = "x,y,z,R\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Point3 x(lo + (hi - lo) * i / (n - 1), lo + (hi - lo) * j / (n - 1),
                       lo + (hi - lo) * k / (n - 1));
        csv += format_double(x.x()) + "," + format_double(x.y()) + "," + format_double(x.z()) + "," +
               format_double(eval(x)) + "\n";
      }
  emit(out, csv);
  return kOk;
}

int cmd_geodesic(const std::string& from, const std::string& dir, const IntegratorSettings& settings,
                 const std::string& out) {
  const Point3 x = parse_point(from, "--from");
  const Vec3 d = parse_point(dir, "--dir");
  if (d.norm() == 0.0) throw UsageError("--dir: direction must be nonzero");
  settings.validate();
  const RayTrajectory traj = integrate({x, normalize_velocity(x, d)}, settings);
  BundleResult single;
  single.config.integrator = settings;
  single.trajectories.push_back(traj);
  if (!out.empty()) write_file_atomic(out, trajectories_csv(single));
  const auto& end = traj.samples.back().state;
  std::cerr << "status=" << (traj.completed() ? "completed" : "aborted:" + to_string(traj.abort))
            << " t=" << format_double(traj.t_final()) << " steps=" << traj.samples.size() - 1
            << " max_drift=" << format_double(traj.max_drift()) << "\n";
  std::cout << format_double(end.position.x()) << "," << format_double(end.position.y()) << ","
            << format_double(end.position.z()) << "\n";
  return traj.completed() ? kOk : kDegraded;
}

int cmd_scenario(const std::string& config, const std::string& output_dir, unsigned threads) {
  ScenarioConfig cfg;
  try {
    cfg = load_scenario(config);
  } catch (const IoError& e) {
    throw UsageError(e.what());
  }
  if (!output_dir.empty()) {
    namespace fs = std::filesystem;
    cfg.outputs.trajectories_csv = (fs::path(output_dir) / fs::path(cfg.outputs.trajectories_csv).filename()).string();
    cfg.outputs.diagnostics_json = (fs::path(output_dir) / fs::path(cfg.outputs.diagnostics_json).filename()).string();
  }
  for (const auto& p : {cfg.outputs.trajectories_csv, cfg.outputs.diagnostics_json}) {
    const auto parent = std::filesystem::path(p).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent))
      throw UsageError("output directory does not exist: " + parent.string());
  }

  const BundleResult result = run(cfg, threads);
  write_file_atomic(cfg.outputs.trajectories_csv, trajectories_csv(result));
  write_file_atomic(cfg.outputs.diagnostics_json, diagnostics_json(result));

  std::size_t focal = 0;
  if (result.completed() >= 3) focal = focal_points(result, cfg.diagnostics.sample_dt).size();
  std::cout << cfg.name << ": rays=" << result.trajectories.size() << " completed=" << result.completed()
            << " aborted=" << result.aborted() << " focal_points=" << focal
            << " max_drift=" << format_double(result.max_drift()) << "\n";
  return result.degraded() ? kDegraded : kOk;
}

int cmd_charge(int a, int b, const std::string& preimage, int samples, const std::string& out) {
  AnsatzConfig cfg;
  cfg.a = a;
  cfg.b = b;
  const ChargeResult w = hopf_charge_whitehead(cfg);
  std::cout << "whitehead=" << format_double(w.value) << " error_estimate=" << format_double(w.error_estimate)
            << " tail=" << format_double(w.tail_estimate) << (w.converged ? "" : " (not converged)") << "\n";
  if (a != 0 || b != 0) {
    const LinkingResult l = preimage_linking_number(cfg, {std::sinh(1.0), 0.5}, {std::sinh(0.7), 2.0});
    std::cout << "linking=" << format_double(l.value) << " samples=" << l.samples << "\n";
  }
  if (!preimage.empty()) {
    const auto t = parse_list(preimage, 2, "--preimage");
    if (samples < 8) throw UsageError("--samples: must be >= 8");
    emit(out, curve_csv(preimage_curve(cfg, {t[0], t[1]}, samples)));
  }
  return kOk;
}

int cmd_validate(const std::string& json_out) {
  const ValidationReport rep = run_validation();
  std::cout << rep.text();
  if (!json_out.empty()) write_file_atomic(json_out, rep.json());
  return rep.all_passed() ? kOk : kValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective geometry and geodesic ray tracing around a Hopf soliton"};
  app.require_subcommand(1);

  std::string at, grid, out, from, dir, config, output_dir, preimage, json_out;
  bool inverse = false, toroidal = false, numeric = false;
  unsigned threads = 0;
  int a = 1, b = 1, samples = 256;
  IntegratorSettings settings;

  auto* metric = app.add_subcommand("metric", "Print the effective metric at a point");
  metric->add_option("--at", at, "x,y,z (or eta,theta,psi with --toroidal)")->required();
  metric->add_flag("--inverse", inverse, "Reciprocal metric m^-1");
  metric->add_flag("--toroidal", toroidal, "Toroidal chart components");

  auto* ricci = app.add_subcommand("ricci", "Ricci scalar at a point or on a lattice");
  ricci->add_option("--at", at, "x,y,z");
  ricci->add_option("--grid", grid, "min,max,n lattice on [min,max]^3 (CSV x,y,z,R)");
  ricci->add_flag("--numeric", numeric, "Finite-difference curvature instead of the closed form");
  ricci->add_option("--out", out, "CSV path (default stdout)");

  auto* geo = app.add_subcommand("geodesic", "Integrate one unit-speed geodesic");
  geo->add_option("--from", from, "x,y,z")->required();
  geo->add_option("--dir", dir, "initial direction dx,dy,dz")->required();
  geo->add_option("--t-end", settings.t_end, "end time")->required();
  geo->add_option("--rel-tol", settings.rel_tol);
  geo->add_option("--abs-tol", settings.abs_tol);
  geo->add_option("--h-init", settings.h_init);
  geo->add_option("--h-min", settings.h_min);
  geo->add_option("--h-max", settings.h_max);
  geo->add_option("--out", out, "trajectory CSV path");

  auto* scen = app.add_subcommand("scenario", "Run a ray-bundle scenario from a JSON config");
  scen->add_option("--config", config, "scenario JSON")->required();
  scen->add_option("--output-dir", output_dir, "write outputs into this directory");
  scen->add_option("--threads", threads, "worker threads (0 = all cores)");

  auto* charge = app.add_subcommand("charge", "Hopf charge by Whitehead integral and linking number");
  charge->add_option("--a", a, "winding a");
  charge->add_option("--b", b, "winding b");
  charge->add_option("--preimage", preimage, "R,Phi: export the preimage curve of this sphere point");
  charge->add_option("--samples", samples, "preimage curve samples");
  charge->add_option("--out", out, "preimage CSV path (default stdout)");

  auto* val = app.add_subcommand("validate", "Run the cross-validation battery");
  val->add_option("--json", json_out, "also write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*metric) return cmd_metric(at, inverse, toroidal);
    if (*ricci) return cmd_ricci(at, grid, numeric, out);
    if (*geo) return cmd_geodesic(from, dir, settings, out);
    if (*scen) return cmd_scenario(config, output_dir, threads);
    if (*charge) return cmd_charge(a, b, preimage, samples, out);
    if (*val) return cmd_validate(json_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

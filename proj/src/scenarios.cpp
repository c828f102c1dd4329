#include "hopfion/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "hopfion/effective_geometry.hpp"

namespace hopfion {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Orthonormal pair spanning the plane orthogonal to the unit vector n.
std::pair<Vec3, Vec3> plane_basis(const Vec3& n) {
  const Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = (seed - seed.dot(n) * n).normalized();
  return {e1, n.cross(e1)};
}

double azimuth(int k, int n) { return 2.0 * std::numbers::pi * k / n; }

void require_direction(const Vec3& v, const char* field) {
  if (!v.allFinite() || v.norm() == 0.0)
    throw std::invalid_argument(std::string(field) + ": must be a nonzero finite vector");
}

}  // namespace

int ScenarioConfig::ray_count() const {
  return std::visit([](const auto& d) { return d.n; }, directions);
}

void ScenarioConfig::validate() const {
  if (ray_count() < 1) throw std::invalid_argument("directions.n: must be >= 1");
  integrator.validate();
  std::visit(overloaded{
                 [](const PointSource& s) {
                   if (!s.at.allFinite()) throw std::invalid_argument("source.params.at: not finite");
                 },
                 [](const SegmentSource& s) {
                   if (!s.from.allFinite() || !s.to.allFinite())
                     throw std::invalid_argument("source.params: endpoints not finite");
                   if (s.from == s.to)
                     throw std::invalid_argument("source.params: segment endpoints must be distinct");
                 },
                 [](const RingSource& s) {
                   if (!s.center.allFinite())
                     throw std::invalid_argument("source.params.center: not finite");
                   if (!(s.radius > 0.0) || !std::isfinite(s.radius))
                     throw std::invalid_argument("source.params.radius: must be positive");
                 }},
             source);
  std::visit(overloaded{[](const PlanarFan& d) { require_direction(d.normal, "directions.params.normal"); },
                        [](const Parallel& d) {
                          require_direction(d.direction, "directions.params.direction");
                        },
                        [](const Cone& d) {
                          require_direction(d.axis, "directions.params.axis");
                          if (!(d.half_angle > 0.0 && d.half_angle < std::numbers::pi))
                            throw std::invalid_argument(
                                "directions.params.half_angle: must lie in (0, pi)");
                        }},
             directions);

  const bool point = std::holds_alternative<PointSource>(source);
  const bool parallel = std::holds_alternative<Parallel>(directions);
  if (point == parallel)
    throw std::invalid_argument(point ? "directions.type: a point source needs planar_fan or cone"
                                      : "directions.type: segment and ring sources need parallel");
  if (!(diagnostics.sample_dt > 0.0)) throw std::invalid_argument("diagnostics.sample_dt: must be positive");
  for (double t : diagnostics.wavefront_times)
    if (!(t >= 0.0 && t <= integrator.t_end))
      throw std::invalid_argument("diagnostics.wavefront_times: entries must lie in [0, t_end]");
}

std::vector<GeodesicState> ScenarioConfig::initial_states(const MetricField& metric) const {
  validate();
  const int n = ray_count();
  std::vector<Point3> seeds;
  std::vector<Vec3> dirs;

  std::visit(overloaded{[&](const PointSource& s) { seeds.assign(n, s.at); },
                        [&](const SegmentSource& s) {
                          for (int k = 0; k < n; ++k) {
                            const double w = n == 1 ? 0.5 : static_cast<double>(k) / (n - 1);
                            seeds.push_back((1.0 - w) * s.from + w * s.to);
                          }
                        },
                        [&](const RingSource& s) {
                          for (int k = 0; k < n; ++k) {
                            const double phi = azimuth(k, n);
                            seeds.push_back(s.center +
                                            s.radius * Vec3(std::cos(phi), std::sin(phi), 0.0));
                          }
                        }},
             source);

  std::visit(overloaded{[&](const PlanarFan& d) {
                          const auto [e1, e2] = plane_basis(d.normal.normalized());
                          for (int k = 0; k < n; ++k) {
                            const double a = azimuth(k, n);
                            dirs.push_back(std::cos(a) * e1 + std::sin(a) * e2);
                          }
                        },
                        [&](const Parallel& d) { dirs.assign(n, d.direction.normalized()); },
                        [&](const Cone& d) {
                          const Vec3 axis = d.axis.normalized();
                          const auto [e1, e2] = plane_basis(axis);
                          for (int k = 0; k < n; ++k) {
                            const double a = azimuth(k, n);
                            dirs.push_back(std::cos(d.half_angle) * axis +
                                           std::sin(d.half_angle) *
                                               (std::cos(a) * e1 + std::sin(a) * e2));
                          }
                        }},
             directions);

  std::vector<GeodesicState> states;
  states.reserve(n);
  for (int k = 0; k < n; ++k)
    states.push_back({seeds[k], normalize_velocity(seeds[k], dirs[k], metric)});
  return states;
}

std::vector<GeodesicState> ScenarioConfig::initial_states() const {
  return initial_states(hopfion_metric_field());
}

ScenarioConfig build_fig2(int n, double t_end) {
  ScenarioConfig cfg;
  cfg.name = "fig2";
  cfg.source = PointSource{Point3(3.0, 0.0, 0.0)};
  cfg.directions = PlanarFan{n, Vec3::UnitZ()};
  cfg.integrator.t_end = t_end;
  cfg.outputs = {"fig2_trajectories.csv", "fig2_diagnostics.json"};
  return cfg;
}

ScenarioConfig build_fig3(int n, double t_end) {
  ScenarioConfig cfg = build_fig2(n, t_end);
  cfg.name = "fig3";
  cfg.outputs = {"fig3_trajectories.csv", "fig3_diagnostics.json"};
  return cfg;
}

ScenarioConfig build_fig4(int n, double t_end) {
  ScenarioConfig cfg;
  cfg.name = "fig4";
  cfg.source = SegmentSource{Point3(5.0, -5.0, 0.0), Point3(5.0, 5.0, 0.0)};
  cfg.directions = Parallel{n, -Vec3::UnitX()};
  cfg.integrator.t_end = t_end;
  cfg.outputs = {"fig4_trajectories.csv", "fig4_diagnostics.json"};
  return cfg;
}

ScenarioConfig build_fig5(int n, double t_end) {
  ScenarioConfig cfg;
  cfg.name = "fig5";
  cfg.source = SegmentSource{Point3(5.0, 0.0, -5.0), Point3(5.0, 0.0, 5.0)};
  cfg.directions = Parallel{n, -Vec3::UnitX()};
  cfg.integrator.t_end = t_end;
  cfg.outputs = {"fig5_trajectories.csv", "fig5_diagnostics.json"};
  return cfg;
}

ScenarioConfig build_fig6(int n, double half_angle, double t_end) {
  ScenarioConfig cfg;
  cfg.name = "fig6";
  cfg.source = PointSource{Point3(0.0, 0.0, 5.0)};
  cfg.directions = Cone{n, -Vec3::UnitZ(), half_angle};
  cfg.integrator.t_end = t_end;
  cfg.outputs = {"fig6_trajectories.csv", "fig6_diagnostics.json"};
  return cfg;
}

ScenarioConfig build_fig7(int n, double radius, double z0, double t_end) {
  ScenarioConfig cfg;
  cfg.name = "fig7";
  cfg.source = RingSource{Point3(0.0, 0.0, z0), radius};
  cfg.directions = Parallel{n, -Vec3::UnitZ()};
  cfg.integrator.t_end = t_end;
  cfg.outputs = {"fig7_trajectories.csv", "fig7_diagnostics.json"};
  return cfg;
}

int BundleResult::completed() const {
  return static_cast<int>(std::count_if(trajectories.begin(), trajectories.end(),
                                        [](const RayTrajectory& r) { return r.completed(); }));
}

bool BundleResult::degraded() const {
  return 10 * aborted() > static_cast<int>(trajectories.size());
}

double BundleResult::max_drift() const {
  double m = 0.0;
  for (const auto& r : trajectories) m = std::max(m, r.max_drift());
  return m;
}

BundleResult run(const ScenarioConfig& cfg, const Geometry& geometry, unsigned threads) {
  const std::vector<GeodesicState> starts = cfg.initial_states(geometry.metric);
  BundleResult result;
  result.config = cfg;
  result.trajectories.resize(starts.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(starts.size()));

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](unsigned id) {
    try {
      for (std::size_t i = next++; i < starts.size(); i = next++)
        result.trajectories[i] = integrate(starts[i], cfg.integrator, geometry);
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned id = 1; id < threads; ++id) pool.emplace_back(worker, id);
  worker(0);
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return result;
}

BundleResult run(const ScenarioConfig& cfg, unsigned threads) {
  return run(cfg, Geometry::hopfion(), threads);
}

double bundle_spread(const BundleResult& result, double t, Point3* centroid) {
  std::vector<Point3> pts;
  for (const auto& r : result.trajectories)
    if (r.completed()) pts.push_back(r.state_at(t).position);
  if (pts.empty()) throw std::invalid_argument("bundle_spread: no completed rays");
  Point3 c = Point3::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  double ss = 0.0;
  for (const auto& p : pts) ss += (p - c).squaredNorm();
  if (centroid) *centroid = c;
  return std::sqrt(ss / pts.size());
}

std::vector<FocalPoint> focal_points(const BundleResult& result, double dt, double min_prominence) {
  if (result.completed() < 3) throw std::invalid_argument("focal_points: need at least 3 completed rays");
  if (!(dt > 0.0)) throw std::invalid_argument("focal_points: dt must be positive");
  double t_max = std::numeric_limits<double>::infinity();
  for (const auto& r : result.trajectories)
    if (r.completed()) t_max = std::min(t_max, r.t_final());

  const int n = static_cast<int>(std::floor(t_max / dt + 1e-9)) + 1;
  std::vector<double> spread(n);
  for (int i = 0; i < n; ++i) spread[i] = bundle_spread(result, std::min(i * dt, t_max));

  std::vector<FocalPoint> out;
  for (int i = 1; i + 1 < n; ++i) {
    if (!(spread[i] < spread[i - 1] && spread[i] <= spread[i + 1])) continue;
    double left = spread[i], right = spread[i];
    for (int j = i - 1; j >= 0 && spread[j] >= spread[i]; --j) left = std::max(left, spread[j]);
    for (int j = i + 1; j < n && spread[j] >= spread[i]; ++j) right = std::max(right, spread[j]);
    if (std::min(left, right) - spread[i] < min_prominence) continue;

    // golden-section refinement on [t_{i-1}, t_{i+1}]
    constexpr double g = 0.61803398874989485;
    double a = (i - 1) * dt, b = std::min((i + 1) * dt, t_max);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = bundle_spread(result, c), fd = bundle_spread(result, d);
    while (b - a > 1e-10) {
      if (fc <= fd) {
        b = d, d = c, fd = fc;
        c = b - g * (b - a);
        fc = bundle_spread(result, c);
      } else {
        a = c, c = d, fc = fd;
        d = a + g * (b - a);
        fd = bundle_spread(result, d);
      }
    }
    FocalPoint fp;
    fp.t = 0.5 * (a + b);
    fp.spread = bundle_spread(result, fp.t, &fp.centroid);
    if (spread[i] < fp.spread) {
      fp.t = i * dt;
      fp.spread = bundle_spread(result, fp.t, &fp.centroid);
    }
    out.push_back(fp);
  }
  return out;
}

WavefrontMeasure wavefront_measure(const BundleResult& result, double t, const MetricField& metric) {
  if (!std::holds_alternative<PointSource>(result.config.source) ||
      !std::holds_alternative<PlanarFan>(result.config.directions))
    throw std::invalid_argument("wavefront_measure: needs a point source with a planar fan");
  std::vector<Point3> pts;
  for (const auto& r : result.trajectories) {
    if (r.t_final() < t) throw std::invalid_argument("wavefront_measure: a ray does not reach t");
    pts.push_back(r.state_at(t).position);
  }
  WavefrontMeasure w;
  w.t = t;
  w.disk_perimeter = 2.0 * std::numbers::pi * t;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point3& p = pts[i];
    const Point3& q = pts[(i + 1) % pts.size()];
    const Vec3 d = q - p;
    w.euclidean_perimeter += d.norm();
    w.perimeter += std::sqrt(d.dot(metric(0.5 * (p + q)) * d));
  }
  return w;
}

WavefrontMeasure wavefront_measure(const BundleResult& result, double t) {
  return wavefront_measure(result, t, hopfion_metric_field());
}

}  // namespace hopfion

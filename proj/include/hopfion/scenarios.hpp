#pragma once

// Ray-bundle experiments: sources, initial directions, batch integration and
// the bundle diagnostics (focal points, wavefront perimeters).

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hopfion/geodesics.hpp"

namespace hopfion {

struct PointSource {
  Point3 at = Point3::Zero();
};

// n seeds equally spaced from `from` to `to`, endpoints included.
struct SegmentSource {
  Point3 from = Point3::Zero();
  Point3 to = Point3::Zero();
};

// n seeds on a horizontal circle, azimuths 2 pi k / n.
struct RingSource {
  Point3 center = Point3::Zero();
  double radius = 1.0;
};

using Source = std::variant<PointSource, SegmentSource, RingSource>;

// n directions at angles 2 pi k / n in the plane orthogonal to `normal`,
// starting from the projection of +x (or +y if normal is along x).
struct PlanarFan {
  int n = 1;
  Vec3 normal = Vec3::UnitZ();
};

struct Parallel {
  int n = 1;
  Vec3 direction = -Vec3::UnitX();
};

// n directions at Euclidean angle half_angle from `axis`, azimuths 2 pi k / n
// taken right-handed about `axis` (clockwise seen from +z when axis = -z).
struct Cone {
  int n = 1;
  Vec3 axis = -Vec3::UnitZ();
  double half_angle = 0.0;
};

using Directions = std::variant<PlanarFan, Parallel, Cone>;

struct OutputPaths {
  std::string trajectories_csv;
  std::string diagnostics_json;
};

struct DiagnosticSettings {
  double sample_dt = 0.01;             // time grid of the focal scan
  std::vector<double> wavefront_times;  // fan scenarios; empty = 1, 2, ..., t_end
};

struct ScenarioConfig {
  std::string name = "scenario";
  Source source;
  Directions directions;
  IntegratorSettings integrator;  // integrator.t_end is the scenario t_end
  DiagnosticSettings diagnostics;
  OutputPaths outputs;

  int ray_count() const;
  // Throws std::invalid_argument with the offending field path.
  void validate() const;
  // Unit-speed initial states in seed order.
  std::vector<GeodesicState> initial_states(const MetricField& metric) const;
  std::vector<GeodesicState> initial_states() const;
};

ScenarioConfig build_fig2(int n = 314, double t_end = 8.0);
ScenarioConfig build_fig3(int n = 24, double t_end = 8.0);
ScenarioConfig build_fig4(int n = 200, double t_end = 15.0);
ScenarioConfig build_fig5(int n = 200, double t_end = 15.0);
ScenarioConfig build_fig6(int n = 12, double half_angle = 0.78539816339744831, double t_end = 20.0);
ScenarioConfig build_fig7(int n = 12, double radius = 1.0, double z0 = 5.0, double t_end = 12.0);

struct BundleResult {
  ScenarioConfig config;
  std::vector<RayTrajectory> trajectories;  // seed order

  int completed() const;
  int aborted() const { return static_cast<int>(trajectories.size()) - completed(); }
  // More than 10% of the rays aborted.
  bool degraded() const;
  double max_drift() const;
};

// threads = 0 uses the hardware concurrency. Output is independent of the
// thread count.
BundleResult run(const ScenarioConfig& cfg, const Geometry& geometry, unsigned threads = 0);
BundleResult run(const ScenarioConfig& cfg, unsigned threads = 0);

struct FocalPoint {
  double t = 0.0;
  Point3 centroid = Point3::Zero();
  double spread = 0.0;  // RMS distance of the same-t ray points from the centroid
};

// RMS spread of the completed rays at time t.
double bundle_spread(const BundleResult& result, double t, Point3* centroid = nullptr);

// Local minima of the spread over the common time span of the completed rays,
// each refined by golden-section search. Minima whose prominence is below
// `min_prominence` (absolute) are ignored.
std::vector<FocalPoint> focal_points(const BundleResult& result, double dt = 0.01,
                                     double min_prominence = 1e-6);

struct WavefrontMeasure {
  double t = 0.0;
  double perimeter = 0.0;           // closed polyline length in the effective metric
  double euclidean_perimeter = 0.0;  // same polyline, flat length
  double disk_perimeter = 0.0;       // 2 pi t
};

// Point source with planar fan only; all rays must reach t.
WavefrontMeasure wavefront_measure(const BundleResult& result, double t,
                                   const MetricField& metric);
WavefrontMeasure wavefront_measure(const BundleResult& result, double t);

// Parsing and export; see README for the schema.
ScenarioConfig parse_scenario_json(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);
std::string scenario_to_json(const ScenarioConfig& cfg);
std::string trajectories_csv(const BundleResult& result);
std::string diagnostics_json(const BundleResult& result);

}  // namespace hopfion

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "hopfion/effective_geometry.hpp"
#include "hopfion/scenarios.hpp"

using namespace hopfion;

namespace {

constexpr double kPi = std::numbers::pi;

Mat3 rot_z(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }

std::string minimal_config() {
  return R"({
    "name": "t",
    "source": {"type": "point", "params": {"at": [3, 0, 0]}},
    "directions": {"type": "planar_fan", "n": 8, "params": {"normal": [0, 0, 1]}},
    "t_end": 2
  })";
}

std::string parse_error(const std::string& text) {
  try {
    parse_scenario_json(text);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Builders, RayCounts) {
  EXPECT_EQ(build_fig2().ray_count(), 314);
  EXPECT_EQ(build_fig3().ray_count(), 24);
  EXPECT_EQ(build_fig4().ray_count(), 200);
  EXPECT_EQ(build_fig5().ray_count(), 200);
  EXPECT_EQ(build_fig6().ray_count(), 12);
  EXPECT_EQ(build_fig7().ray_count(), 12);
  EXPECT_EQ(build_fig2().integrator.t_end, 8.0);
  EXPECT_EQ(build_fig6().integrator.t_end, 20.0);
}

TEST(Builders, InitialStatesAreUnitSpeed) {
  for (const auto& cfg : {build_fig2(), build_fig4(), build_fig5(), build_fig6(), build_fig7()})
    for (const auto& s : cfg.initial_states()) EXPECT_NEAR(constraint_value(s), 1.0, 1e-14) << cfg.name;
}

TEST(Builders, FanDirectionsEquallySpacedInPlane) {
  const auto states = build_fig3().initial_states();
  for (std::size_t k = 0; k < states.size(); ++k) {
    const Vec3& v = states[k].velocity;
    EXPECT_EQ(v.z(), 0.0);
    EXPECT_EQ(states[k].position, Point3(3, 0, 0));
    const double expected = 2 * kPi * k / states.size();
    EXPECT_NEAR(std::remainder(std::atan2(v.y(), v.x()) - expected, 2 * kPi), 0.0, 1e-12);
  }
}

TEST(Builders, ConeHalfAngle) {
  for (const auto& s : build_fig6().initial_states()) {
    EXPECT_EQ(s.position, Point3(0, 0, 5));
    const double angle = std::acos(-s.velocity.z() / s.velocity.norm());
    EXPECT_NEAR(angle, kPi / 4, 1e-12);
  }
}

TEST(Builders, SegmentSeeds) {
  const auto f4 = build_fig4().initial_states();
  EXPECT_LT((f4.front().position - Point3(5, -5, 0)).norm(), 1e-15);
  EXPECT_LT((f4.back().position - Point3(5, 5, 0)).norm(), 1e-15);
  const double gap = 10.0 / 199;
  for (std::size_t i = 1; i < f4.size(); ++i)
    EXPECT_NEAR((f4[i].position - f4[i - 1].position).norm(), gap, 1e-12);
  for (const auto& s : build_fig5().initial_states()) {
    EXPECT_EQ(s.position.y(), 0.0);
    EXPECT_NEAR(s.position.x(), 5.0, 1e-15);
    EXPECT_LT((s.velocity.normalized() + Vec3::UnitX()).norm(), 1e-15);
  }
}

TEST(Builders, RingSeeds) {
  const auto st = build_fig7().initial_states();
  for (std::size_t k = 0; k < st.size(); ++k) {
    EXPECT_NEAR(st[k].position.head<2>().norm(), 1.0, 1e-15);
    EXPECT_EQ(st[k].position.z(), 5.0);
    EXPECT_NEAR(std::remainder(std::atan2(st[k].position.y(), st[k].position.x()) - 2 * kPi * k / 12, 2 * kPi),
                0.0, 1e-12);
  }
}

TEST(Builders, InvalidCombinationsRejected) {
  ScenarioConfig cfg = build_fig2();
  cfg.directions = Parallel{4, -Vec3::UnitX()};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = build_fig4();
  cfg.directions = PlanarFan{4, Vec3::UnitZ()};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = build_fig6();
  std::get<Cone>(cfg.directions).half_angle = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_THROW(build_fig2(0).validate(), std::invalid_argument);
}

TEST(Run, RayTowardMinusXStaysInPlane) {
  const BundleResult r = run(build_fig2(314, 0.5));
  EXPECT_EQ(r.completed(), 314);
  const auto& ray = r.trajectories[157];
  ASSERT_LT((ray.samples[0].state.velocity.normalized() + Vec3::UnitX()).norm(), 1e-12);
  for (const auto& s : ray.samples) ASSERT_LT(std::abs(s.state.position.z()), 1e-3);
}

TEST(Run, SmallDiskIsNearlyFlat) {
  // Out-of-plane displacement starts at second order in t.
  const BundleResult r = run(build_fig2(64, 0.4));
  double z1 = 0.0, z2 = 0.0;
  for (const auto& t : r.trajectories) {
    z1 = std::max(z1, std::abs(t.state_at(0.1).position.z()));
    z2 = std::max(z2, std::abs(t.state_at(0.2).position.z()));
  }
  EXPECT_LT(z1, 1e-3);
  EXPECT_NEAR(std::log2(z2 / z1), 2.0, 0.3);
}

TEST(Run, DeterministicAcrossThreadCounts) {
  const ScenarioConfig cfg = build_fig3(24, 4.0);
  const std::string one = trajectories_csv(run(cfg, 1u));
  const std::string many = trajectories_csv(run(cfg, 4u));
  EXPECT_EQ(one, many);
  EXPECT_EQ(one, trajectories_csv(run(cfg, 4u)));
}

TEST(Run, ConeIsRotationallySymmetric) {
  const BundleResult r = run(build_fig6(12, kPi / 4, 6.0));
  ASSERT_EQ(r.completed(), 12);
  const Mat3 R = rot_z(-2 * kPi / 12);  // azimuth runs right-handed about -z
  for (std::size_t k = 0; k + 1 < 12; ++k) {
    const Point3 a = R * r.trajectories[k].state_at(6.0).position;
    EXPECT_LT((a - r.trajectories[k + 1].state_at(6.0).position).norm(), 1e-6) << k;
  }
}

TEST(Run, RingIsRotationallySymmetric) {
  const BundleResult r = run(build_fig7(12, 1.0, 5.0, 8.0));
  ASSERT_EQ(r.completed(), 12);
  const Mat3 R = rot_z(2 * kPi / 12);
  for (std::size_t k = 0; k + 1 < 12; ++k) {
    const Point3 a = R * r.trajectories[k].state_at(8.0).position;
    EXPECT_LT((a - r.trajectories[k + 1].state_at(8.0).position).norm(), 1e-6) << k;
  }
}

TEST(Run, DegradedWhenManyRaysAbort) {
  Geometry wrong{Geometry::flat().acceleration, hopfion_metric_field()};
  const BundleResult r = run(build_fig3(24, 8.0), wrong, 2u);
  EXPECT_GT(r.aborted(), 3);
  EXPECT_TRUE(r.degraded());
  const BundleResult ok = run(build_fig3(24, 2.0), 2u);
  EXPECT_FALSE(ok.degraded());
}

TEST(Focal, FlatParallelRaysHaveNone) {
  const BundleResult r = run(build_fig7(12, 1.0, 5.0, 6.0), Geometry::flat());
  EXPECT_TRUE(focal_points(r).empty());
  EXPECT_NEAR(bundle_spread(r, 3.0), 1.0, 1e-12);
}

TEST(Focal, RingBundleFocusesOnAxis) {
  const BundleResult r = run(build_fig7());
  const auto fp = focal_points(r);
  ASSERT_GE(fp.size(), 2u);
  for (const auto& f : fp) {
    EXPECT_LT(f.centroid.head<2>().norm(), 1e-6);
    EXPECT_LT(f.spread, 0.15);
  }
  EXPECT_LT(fp[0].t, fp[1].t);
  // The spread is minimal at the refined time compared with its neighbours.
  EXPECT_LE(fp[0].spread, bundle_spread(r, fp[0].t - 0.01) + 1e-12);
  EXPECT_LE(fp[0].spread, bundle_spread(r, fp[0].t + 0.01) + 1e-12);
}

TEST(Wavefront, SmallTimeMatchesDisk) {
  const BundleResult r = run(build_fig2(314, 0.2));
  const WavefrontMeasure w = wavefront_measure(r, 0.05);
  EXPECT_NEAR(w.perimeter / w.disk_perimeter, 1.0, 0.01);
  EXPECT_NEAR(w.disk_perimeter, 2 * kPi * 0.05, 1e-15);
}

TEST(Wavefront, ConvergesInRayCount) {
  const WavefrontMeasure a = wavefront_measure(run(build_fig2(314, 3.0)), 3.0);
  const WavefrontMeasure b = wavefront_measure(run(build_fig2(628, 3.0)), 3.0);
  EXPECT_LT(std::abs(a.perimeter - b.perimeter) / b.perimeter, 0.005);
}

TEST(Wavefront, FlatFanIsACircle) {
  const BundleResult r = run(build_fig2(2000, 2.0), Geometry::flat());
  const WavefrontMeasure w = wavefront_measure(r, 2.0, [](const Point3&) { return Mat3::Identity().eval(); });
  EXPECT_NEAR(w.perimeter, 4 * kPi, 1e-5);
  EXPECT_EQ(w.perimeter, w.euclidean_perimeter);
}

TEST(Wavefront, RequiresFanScenario) {
  const BundleResult r = run(build_fig7(12, 1.0, 5.0, 1.0));
  EXPECT_THROW(wavefront_measure(r, 0.5), std::invalid_argument);
  const BundleResult f = run(build_fig2(16, 1.0));
  EXPECT_THROW(wavefront_measure(f, 2.0), std::invalid_argument);
}

TEST(Json, MinimalConfigParses) {
  const ScenarioConfig cfg = parse_scenario_json(minimal_config());
  EXPECT_EQ(cfg.name, "t");
  EXPECT_EQ(cfg.ray_count(), 8);
  EXPECT_EQ(cfg.integrator.t_end, 2.0);
  EXPECT_EQ(cfg.integrator.rel_tol, 1e-8);
}

TEST(Json, RoundTrip) {
  for (const auto& cfg : {build_fig2(), build_fig4(), build_fig6(), build_fig7()}) {
    const std::string text = scenario_to_json(cfg);
    EXPECT_EQ(scenario_to_json(parse_scenario_json(text)), text) << cfg.name;
  }
}

TEST(Json, ErrorsNameTheField) {
  auto cfg = nlohmann::json::parse(minimal_config());
  cfg["directions"]["n"] = -3;
  EXPECT_NE(parse_error(cfg.dump()).find("directions.n"), std::string::npos);

  cfg = nlohmann::json::parse(minimal_config());
  cfg["source"]["params"]["at"] = {1, 2};
  EXPECT_NE(parse_error(cfg.dump()).find("source.params.at"), std::string::npos);

  cfg = nlohmann::json::parse(minimal_config());
  cfg["integrator"] = {{"rel_tol", "tight"}};
  EXPECT_NE(parse_error(cfg.dump()).find("integrator.rel_tol"), std::string::npos);

  cfg = nlohmann::json::parse(minimal_config());
  cfg["spurious"] = 1;
  EXPECT_NE(parse_error(cfg.dump()).find("spurious"), std::string::npos);

  cfg = nlohmann::json::parse(minimal_config());
  cfg.erase("t_end");
  EXPECT_NE(parse_error(cfg.dump()).find("t_end"), std::string::npos);

  EXPECT_FALSE(parse_error("{not json").empty());
}

TEST(Json, ShippedConfigsLoad) {
  for (int k : {2, 3, 4, 5, 6, 7}) {
    const ScenarioConfig cfg = load_scenario(std::string(HOPFION_CONFIG_DIR) + "/fig" + std::to_string(k) + ".json");
    EXPECT_EQ(cfg.name, "fig" + std::to_string(k));
  }
  const ScenarioConfig f6 = load_scenario(std::string(HOPFION_CONFIG_DIR) + "/fig6.json");
  EXPECT_NEAR(std::get<Cone>(f6.directions).half_angle, kPi / 4, 1e-15);
}

TEST(Export, CsvLayout) {
  const BundleResult r = run(build_fig3(4, 0.5));
  const std::string csv = trajectories_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "ray_id,t,x,y,z,vx,vy,vz,drift");
  std::size_t rows = 0;
  for (const auto& t : r.trajectories) rows += t.samples.size();
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), rows + 1);
}

TEST(Export, DiagnosticsJson) {
  const BundleResult r = run(build_fig2(64, 3.0));
  const auto j = nlohmann::json::parse(diagnostics_json(r));
  EXPECT_EQ(j["rays"], 64);
  EXPECT_EQ(j["completed"], 64);
  EXPECT_EQ(j["degraded"], false);
  ASSERT_EQ(j["wavefronts"].size(), 3u);
  EXPECT_DOUBLE_EQ(j["wavefronts"][1]["t"].get<double>(), 2.0);
  EXPECT_TRUE(j["focal_points"].is_array());
}

#include <cmath>
#include <map>
#include <type_traits>
#include <variant>

#include <nlohmann/json.hpp>

#include "hopfion/io.hpp"
#include "hopfion/scenarios.hpp"

namespace hopfion {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument(path + ": " + what);
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

int count(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < 1 || v > 10'000'000) fail(path, "must be an integer >= 1");
  return static_cast<int>(v);
}

Vec3 vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected an array of 3 numbers");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]"), number(j[2], path + "[2]")};
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
  }
}

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

ScenarioConfig parse_scenario_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("config", "expected an object");
  check_keys(root, "", {"name", "source", "directions", "t_end", "integrator", "diagnostics", "outputs"});

  ScenarioConfig cfg;
  if (root.contains("name")) {
    if (!root["name"].is_string()) fail("name", "expected a string");
    cfg.name = root["name"].get<std::string>();
  }

  const json& src = member(root, "source", "");
  check_keys(src, "source", {"type", "params"});
  const json& stype = member(src, "type", "source");
  const json& sp = member(src, "params", "source");
  if (!stype.is_string()) fail("source.type", "expected a string");
  const std::string st = stype.get<std::string>();
  if (st == "point") {
    check_keys(sp, "source.params", {"at"});
    cfg.source = PointSource{vec3(member(sp, "at", "source.params"), "source.params.at")};
  } else if (st == "segment") {
    check_keys(sp, "source.params", {"from", "to"});
    cfg.source = SegmentSource{vec3(member(sp, "from", "source.params"), "source.params.from"),
                               vec3(member(sp, "to", "source.params"), "source.params.to")};
  } else if (st == "ring") {
    check_keys(sp, "source.params", {"center", "radius"});
    cfg.source = RingSource{vec3(member(sp, "center", "source.params"), "source.params.center"),
                            number(member(sp, "radius", "source.params"), "source.params.radius")};
  } else {
    fail("source.type", "must be one of point, segment, ring");
  }

  const json& dir = member(root, "directions", "");
  check_keys(dir, "directions", {"type", "n", "params"});
  const json& dtype = member(dir, "type", "directions");
  if (!dtype.is_string()) fail("directions.type", "expected a string");
  const int n = count(member(dir, "n", "directions"), "directions.n");
  const json empty = json::object();
  const json& dp = dir.contains("params") ? dir["params"] : empty;
  const std::string dt = dtype.get<std::string>();
  if (dt == "planar_fan") {
    check_keys(dp, "directions.params", {"normal"});
    PlanarFan fan{n, Vec3::UnitZ()};
    if (dp.contains("normal")) fan.normal = vec3(dp["normal"], "directions.params.normal");
    cfg.directions = fan;
  } else if (dt == "parallel") {
    check_keys(dp, "directions.params", {"direction"});
    cfg.directions =
        Parallel{n, vec3(member(dp, "direction", "directions.params"), "directions.params.direction")};
  } else if (dt == "cone") {
    check_keys(dp, "directions.params", {"axis", "half_angle"});
    cfg.directions =
        Cone{n, vec3(member(dp, "axis", "directions.params"), "directions.params.axis"),
             number(member(dp, "half_angle", "directions.params"), "directions.params.half_angle")};
  } else {
    fail("directions.type", "must be one of planar_fan, parallel, cone");
  }

  cfg.integrator.t_end = number(member(root, "t_end", ""), "t_end");
  if (root.contains("integrator")) {
    const json& in = root["integrator"];
    check_keys(in, "integrator", {"rel_tol", "abs_tol", "h_init", "h_min", "h_max", "max_drift"});
    auto opt = [&](const char* key, double& field) {
      if (in.contains(key)) field = number(in[key], std::string("integrator.") + key);
    };
    opt("rel_tol", cfg.integrator.rel_tol);
    opt("abs_tol", cfg.integrator.abs_tol);
    opt("h_init", cfg.integrator.h_init);
    opt("h_min", cfg.integrator.h_min);
    opt("h_max", cfg.integrator.h_max);
    opt("max_drift", cfg.integrator.max_drift);
  }

  if (root.contains("diagnostics")) {
    const json& d = root["diagnostics"];
    check_keys(d, "diagnostics", {"sample_dt", "wavefront_times"});
    if (d.contains("sample_dt")) cfg.diagnostics.sample_dt = number(d["sample_dt"], "diagnostics.sample_dt");
    if (d.contains("wavefront_times")) {
      const json& w = d["wavefront_times"];
      if (!w.is_array()) fail("diagnostics.wavefront_times", "expected an array of numbers");
      for (std::size_t i = 0; i < w.size(); ++i)
        cfg.diagnostics.wavefront_times.push_back(
            number(w[i], "diagnostics.wavefront_times[" + std::to_string(i) + "]"));
    }
  }

  // Missing outputs default to <name>_trajectories.csv and <name>_diagnostics.json.
  cfg.outputs = {cfg.name + "_trajectories.csv", cfg.name + "_diagnostics.json"};
  if (root.contains("outputs")) {
    const json& out = root["outputs"];
    check_keys(out, "outputs", {"trajectories_csv", "diagnostics_json"});
    auto path = [&](const char* key, std::string& field) {
      if (!out.contains(key)) return;
      const json& p = out[key];
      if (!p.is_string() || p.get<std::string>().empty())
        fail(std::string("outputs.") + key, "expected a non-empty string");
      field = p.get<std::string>();
    };
    path("trajectories_csv", cfg.outputs.trajectories_csv);
    path("diagnostics_json", cfg.outputs.diagnostics_json);
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) { return parse_scenario_json(read_file(path)); }

std::string scenario_to_json(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PointSource>)
          j["source"] = {{"type", "point"}, {"params", {{"at", to_json(s.at)}}}};
        else if constexpr (std::is_same_v<T, SegmentSource>)
          j["source"] = {{"type", "segment"},
                         {"params", {{"from", to_json(s.from)}, {"to", to_json(s.to)}}}};
        else
          j["source"] = {{"type", "ring"},
                         {"params", {{"center", to_json(s.center)}, {"radius", s.radius}}}};
      },
      cfg.source);
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PlanarFan>)
          j["directions"] = {{"type", "planar_fan"}, {"n", d.n}, {"params", {{"normal", to_json(d.normal)}}}};
        else if constexpr (std::is_same_v<T, Parallel>)
          j["directions"] = {{"type", "parallel"}, {"n", d.n}, {"params", {{"direction", to_json(d.direction)}}}};
        else
          j["directions"] = {{"type", "cone"},
                             {"n", d.n},
                             {"params", {{"axis", to_json(d.axis)}, {"half_angle", d.half_angle}}}};
      },
      cfg.directions);
  const auto& in = cfg.integrator;
  j["t_end"] = in.t_end;
  j["integrator"] = {{"rel_tol", in.rel_tol}, {"abs_tol", in.abs_tol}, {"h_init", in.h_init},
                     {"h_min", in.h_min},     {"h_max", in.h_max},     {"max_drift", in.max_drift}};
  j["diagnostics"] = {{"sample_dt", cfg.diagnostics.sample_dt}};
  if (!cfg.diagnostics.wavefront_times.empty())
    j["diagnostics"]["wavefront_times"] = cfg.diagnostics.wavefront_times;
  j["outputs"] = {{"trajectories_csv", cfg.outputs.trajectories_csv},
                  {"diagnostics_json", cfg.outputs.diagnostics_json}};
  return j.dump(2) + "\n";
}

std::string trajectories_csv(const BundleResult& result) {
  std::string out = "ray_id,t,x,y,z,vx,vy,vz,drift\n";
  for (std::size_t id = 0; id < result.trajectories.size(); ++id) {
    const std::string prefix = std::to_string(id);
    for (const auto& s : result.trajectories[id].samples) {
      out += prefix;
      out += ',' + format_double(s.t);
      for (int k = 0; k < 3; ++k) out += ',' + format_double(s.state.position(k));
      for (int k = 0; k < 3; ++k) out += ',' + format_double(s.state.velocity(k));
      out += ',' + format_double(s.drift);
      out += '\n';
    }
  }
  return out;
}

std::string diagnostics_json(const BundleResult& result) {
  const ScenarioConfig& cfg = result.config;
  json j;
  j["scenario"] = cfg.name;
  j["rays"] = result.trajectories.size();
  j["completed"] = result.completed();
  j["aborted"] = result.aborted();
  j["degraded"] = result.degraded();
  j["max_drift"] = result.max_drift();

  std::map<std::string, int> reasons;
  for (const auto& r : result.trajectories)
    if (!r.completed()) ++reasons[to_string(r.abort)];
  j["abort_reasons"] = reasons;

  j["focal_points"] = json::array();
  if (result.completed() >= 3) {
    for (const auto& fp : focal_points(result, cfg.diagnostics.sample_dt))
      j["focal_points"].push_back({{"t", fp.t}, {"position", to_json(fp.centroid)}, {"spread", fp.spread}});
  }

  const bool fan = std::holds_alternative<PointSource>(cfg.source) &&
                   std::holds_alternative<PlanarFan>(cfg.directions);
  if (fan) {
    std::vector<double> times = cfg.diagnostics.wavefront_times;
    if (times.empty())
      for (int k = 1; k <= static_cast<int>(std::floor(cfg.integrator.t_end)); ++k) times.push_back(k);
    j["wavefronts"] = json::array();
    for (double t : times) {
      json row = {{"t", t}};
      try {
        const WavefrontMeasure w = wavefront_measure(result, t);
        row["perimeter"] = w.perimeter;
        row["euclidean_perimeter"] = w.euclidean_perimeter;
        row["disk_perimeter"] = w.disk_perimeter;
        row["excess"] = w.perimeter > w.disk_perimeter;
      } catch (const std::invalid_argument& e) {
        row["error"] = e.what();
      }
      j["wavefronts"].push_back(row);
    }
  }
  return j.dump(2) + "\n";
}

}  // namespace hopfion

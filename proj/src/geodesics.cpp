#include "hopfion/geodesics.hpp"

#include <algorithm>
#include <cmath>

#include "hopfion/effective_geometry.hpp"

namespace hopfion {

void IntegratorSettings::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string("integrator.") + name + " must be a positive number");
  };
  positive(rel_tol, "rel_tol");
  positive(abs_tol, "abs_tol");
  positive(h_init, "h_init");
  positive(h_min, "h_min");
  positive(h_max, "h_max");
  positive(max_drift, "max_drift");
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw std::invalid_argument("t_end must be a nonnegative number");
  if (!(h_min <= h_init && h_init <= h_max))
    throw std::invalid_argument("integrator: need h_min <= h_init <= h_max");
  if (max_steps < 1) throw std::invalid_argument("integrator.max_steps must be >= 1");
}

std::string to_string(AbortReason r) {
  switch (r) {
    case AbortReason::none: return "none";
    case AbortReason::step_underflow: return "step_underflow";
    case AbortReason::constraint: return "constraint";
    case AbortReason::step_limit: return "step_limit";
  }
  return "unknown";
}

double RayTrajectory::max_drift() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.drift));
  return m;
}

GeodesicState RayTrajectory::state_at(double t) const {
  if (samples.empty()) throw std::logic_error("state_at: empty trajectory");
  if (t < samples.front().t || t > samples.back().t)
    throw std::out_of_range("state_at: t outside the integrated span");
  auto hi = std::lower_bound(samples.begin(), samples.end(), t,
                             [](const TrajectorySample& s, double v) { return s.t < v; });
  if (hi->t == t) return hi->state;
  auto lo = std::prev(hi);
  const double w = (t - lo->t) / (hi->t - lo->t);
  return {(1.0 - w) * lo->state.position + w * hi->state.position,
          (1.0 - w) * lo->state.velocity + w * hi->state.velocity};
}

Geometry Geometry::hopfion() {
  return {[](const GeodesicState& s) { return rhs_closed_form(s); }, hopfion_metric_field()};
}

Geometry Geometry::flat() {
  return {[](const GeodesicState&) { return Vec3::Zero().eval(); },
          [](const Point3&) { return Mat3::Identity().eval(); }};
}

Geometry Geometry::from_metric(MetricField metric) {
  return {[metric](const GeodesicState& s) { return rhs_christoffel(s, metric); }, metric};
}

double constraint_value(const GeodesicState& s, const MetricField& metric) {
  return s.velocity.dot(metric(s.position) * s.velocity);
}

double constraint_value(const GeodesicState& s) {
  return s.velocity.dot(metric_cartesian(s.position).matrix() * s.velocity);
}

Vec3 normalize_velocity(const Point3& x, const Vec3& direction, const MetricField& metric) {
  if (!direction.allFinite() || direction.norm() == 0.0)
    throw std::invalid_argument("normalize_velocity: direction must be nonzero and finite");
  const Vec3 d = direction / direction.norm();
  return d / std::sqrt(d.dot(metric(x) * d));
}

Vec3 normalize_velocity(const Point3& x, const Vec3& direction) {
  return normalize_velocity(x, direction, hopfion_metric_field());
}

GeodesicState rk4_step(const GeodesicState& s, double h, const Acceleration& accel) {
  if (!(h > 0.0)) throw std::invalid_argument("rk4_step: h must be positive");
  auto shifted = [&](const Vec3& dx, const Vec3& dv, double c) {
    return GeodesicState{s.position + c * dx, s.velocity + c * dv};
  };
  const Vec3 k1x = s.velocity, k1v = accel(s);
  const GeodesicState s2 = shifted(k1x, k1v, 0.5 * h);
  const Vec3 k2x = s2.velocity, k2v = accel(s2);
  const GeodesicState s3 = shifted(k2x, k2v, 0.5 * h);
  const Vec3 k3x = s3.velocity, k3v = accel(s3);
  const GeodesicState s4 = shifted(k3x, k3v, h);
  const Vec3 k4x = s4.velocity, k4v = accel(s4);
  return {s.position + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
          s.velocity + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

GeodesicState rk4_step(const GeodesicState& s, double h) {
  return rk4_step(s, h, rhs_closed_form);
}

GeodesicState integrate_fixed(const GeodesicState& s0, double t_end, int steps,
                              const Acceleration& accel) {
  if (steps < 1) throw std::invalid_argument("integrate_fixed: steps must be >= 1");
  const double h = t_end / steps;
  GeodesicState s = s0;
  for (int i = 0; i < steps; ++i) s = rk4_step(s, h, accel);
  return s;
}

namespace {

// Scaled local error of the step-doubling pair. Position and velocity blocks
// use Euclidean norms so the controller commutes with rotations.
double scaled_error(const GeodesicState& full, const GeodesicState& half,
                    const GeodesicState& start, const IntegratorSettings& cfg) {
  auto block = [&](const Vec3& a, const Vec3& b, const Vec3& c) {
    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(b.norm(), c.norm());
    return (b - a).norm() / 15.0 / scale;
  };
  return std::max(block(full.position, half.position, start.position),
                  block(full.velocity, half.velocity, start.velocity));
}

}  // namespace

RayTrajectory integrate(const GeodesicState& s0, const IntegratorSettings& cfg,
                        const Geometry& geometry) {
  cfg.validate();
  if (!s0.position.allFinite() || !s0.velocity.allFinite())
    throw std::invalid_argument("integrate: non-finite initial state");

  RayTrajectory traj;
  traj.samples.push_back({0.0, s0, constraint_value(s0, geometry.metric) - 1.0});

  double t = 0.0;
  double h = cfg.h_init;
  GeodesicState s = s0;
  long attempts = 0;
  while (t < cfg.t_end) {
    if (++attempts > cfg.max_steps) {
      traj.abort = AbortReason::step_limit;
      break;
    }
    const bool last = t + h >= cfg.t_end;
    const double step = last ? cfg.t_end - t : h;
    const GeodesicState full = rk4_step(s, step, geometry.acceleration);
    const GeodesicState mid = rk4_step(s, 0.5 * step, geometry.acceleration);
    const GeodesicState half = rk4_step(mid, 0.5 * step, geometry.acceleration);
    const double err = scaled_error(full, half, s, cfg);

    const double factor =
        err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
    if (!(err <= 1.0)) {
      if (step <= cfg.h_min) {
        traj.abort = AbortReason::step_underflow;
        break;
      }
      h = std::max(cfg.h_min, step * factor);
      continue;
    }

    t = last ? cfg.t_end : t + step;
    s = half;
    const double drift = constraint_value(s, geometry.metric) - 1.0;
    traj.samples.push_back({t, s, drift});
    if (!std::isfinite(drift) || std::abs(drift) > cfg.max_drift) {
      traj.abort = AbortReason::constraint;
      break;
    }
    if (!last) h = std::clamp(step * factor, cfg.h_min, cfg.h_max);
  }
  return traj;
}

RayTrajectory integrate(const GeodesicState& s0, const IntegratorSettings& cfg) {
  return integrate(s0, cfg, Geometry::hopfion());
}

}  // namespace hopfion

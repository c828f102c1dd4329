#pragma once

// Geodesics of the effective metric m_ij: right-hand sides, classical RK4
// with step-doubling control, and the unit-speed constraint m_ij v^i v^j = 1.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "hopfion/types.hpp"

namespace hopfion {

struct GeodesicState {
  Point3 position = Point3::Zero();
  Vec3 velocity = Vec3::Zero();
};

using Acceleration = std::function<Vec3(const GeodesicState&)>;

struct IntegratorSettings {
  double rel_tol = 1e-8;
  double abs_tol = 1e-8;
  double h_init = 1e-2;
  double h_min = 1e-8;
  double h_max = 0.1;
  double t_end = 8.0;
  double max_drift = 1e-4;  // abort threshold on |m(v,v) - 1|
  long max_steps = 10'000'000;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct TrajectorySample {
  double t = 0.0;
  GeodesicState state;
  double drift = 0.0;  // m(v,v) - 1
};

enum class AbortReason { none, step_underflow, constraint, step_limit };
std::string to_string(AbortReason r);

struct RayTrajectory {
  std::vector<TrajectorySample> samples;
  AbortReason abort = AbortReason::none;

  bool completed() const { return abort == AbortReason::none; }
  double t_final() const { return samples.empty() ? 0.0 : samples.back().t; }
  double max_drift() const;
  // Linear interpolation between accepted steps; t must lie in the span.
  GeodesicState state_at(double t) const;
};

// Acceleration field plus the metric used for normalization and drift.
struct Geometry {
  Acceleration acceleration;
  MetricField metric;

  static Geometry hopfion();  // closed-form right-hand side
  static Geometry flat();
  // -Gamma v v with Christoffel symbols of `metric` by finite differences.
  static Geometry from_metric(MetricField metric);
};

// Closed-form polynomial geodesic equations of metric_cartesian.
Vec3 rhs_closed_form(const GeodesicState& s);

// Gamma[i](j, k) = Gamma^i_jk of a metric field, finite differences.
std::array<Mat3, 3> christoffel_numeric(const Point3& x, const MetricField& metric);

Vec3 rhs_christoffel(const GeodesicState& s, const MetricField& metric);
Vec3 rhs_christoffel(const GeodesicState& s);

// Rescales a nonzero direction so that m(v, v) = 1.
Vec3 normalize_velocity(const Point3& x, const Vec3& direction, const MetricField& metric);
Vec3 normalize_velocity(const Point3& x, const Vec3& direction);

// m_ij v^i v^j
double constraint_value(const GeodesicState& s, const MetricField& metric);
double constraint_value(const GeodesicState& s);

// One classical RK4 step of the first-order system (x, v)' = (v, a).
GeodesicState rk4_step(const GeodesicState& s, double h, const Acceleration& accel);
GeodesicState rk4_step(const GeodesicState& s, double h);

// Fixed-step integration to t_end with n equal steps (convergence studies).
GeodesicState integrate_fixed(const GeodesicState& s0, double t_end, int steps,
                              const Acceleration& accel);

// Adaptive integration by step doubling. Never projects onto the constraint;
// the drift is recorded at every accepted step.
RayTrajectory integrate(const GeodesicState& s0, const IntegratorSettings& cfg,
                        const Geometry& geometry);
RayTrajectory integrate(const GeodesicState& s0, const IntegratorSettings& cfg);

}  // namespace hopfion

#pragma once

// Toroidal chart of R^3, the torus ansatz R = f(eta), Phi = a*theta + b*psi
// into the 2-sphere, and the topological quantities built on it.

#include <functional>
#include <string>
#include <vector>

#include "hopfion/types.hpp"

namespace hopfion {

struct ToroidalPoint {
  double eta = 0.0;    // >= 0; eta = 0 is the z-axis, eta -> inf the core ring
  double theta = 0.0;  // [0, 2pi)
  double psi = 0.0;    // [0, 2pi), azimuth about the z-axis

  // Same point with both angles reduced to [0, 2pi).
  ToroidalPoint normalized() const;
};

// Stereographic coordinates on the unit sphere, projected from the south
// pole: R = 0 is the north pole (vacuum), R -> inf the south pole.
struct SpherePoint {
  double R = 0.0;
  double Phi = 0.0;

  // Embedding into R^3 as a unit vector (north pole = +z).
  Vec3 unit_vector() const;
};

// Radial profile f(eta) of the torus ansatz. Derivatives are analytic when
// supplied, otherwise 4th-order central differences with
// h = 1e-4 * max(1, eta).
class Profile {
 public:
  using Fn = std::function<double(double)>;

  // f = sinh(eta), the exact Q = 1 solution.
  static Profile sinh_exact();
  static Profile from_function(Fn f, std::string name = "custom");
  static Profile from_functions(Fn f, Fn df, Fn d2f, std::string name = "custom");

  double value(double eta) const { return f_(eta); }
  double derivative(double eta) const;
  double second_derivative(double eta) const;
  const std::string& name() const { return name_; }

 private:
  Fn f_;
  Fn df_;
  Fn d2f_;
  std::string name_;
};

struct AnsatzConfig {
  int a = 1;
  int b = 1;
  Profile profile = Profile::sinh_exact();

  int charge() const { return a * b; }
};

// Spatial pullback strain L_ij = h_ab d_i phi^a d_j phi^b in Cartesian
// components, with its eigenvalues relative to the flat metric (ascending).
// Defined on the z-axis by continuity; the core ring is rejected.
struct StrainSample {
  SymTensor3 L;
  std::array<double, 3> lambda_sq{};
};

// Cartesian gradients of the sphere coordinates at a point.
struct MapGradient {
  SpherePoint value;
  Vec3 dR;
  Vec3 dPhi;
};

Point3 toroidal_to_cartesian(const ToroidalPoint& p);

// Inverse chart. Points on the z-axis map to eta = 0 with psi = 0 by
// convention; the core ring and non-finite input raise ChartDomainError.
ToroidalPoint cartesian_to_toroidal(const Point3& x);

// Columns are d(x,y,z)/d eta, d(x,y,z)/d theta, d(x,y,z)/d psi.
Mat3 toroidal_jacobian(const ToroidalPoint& p);

SpherePoint ansatz_map(const AnsatzConfig& cfg, const ToroidalPoint& p);

// LHS - RHS of the profile equation obtained from the static energy
// integral of sigma_1^{3/2}:
//   (1+f^2)/(Delta sinh f^2) [Delta sinh f f'/(1+f^2)]'
//       = (2 f'^2 + (1-f^2)(a^2 + b^2/sinh^2)) / (1+f^2)
double profile_residual(const AnsatzConfig& cfg, double eta);

// First symmetric polynomial of the strain, 4 f^2 q^2 Delta^2 / (1+f^2)^2.
double sigma1(const AnsatzConfig& cfg, const ToroidalPoint& p);

MapGradient map_gradient(const AnsatzConfig& cfg, const Point3& x);
StrainSample strain(const AnsatzConfig& cfg, const Point3& x);

struct ChargeQuadrature {
  double eta_max = 12.0;
  int eta_panels = 48;
  int nodes_per_panel = 8;
  int angular_nodes = 8;
  double tolerance = 1e-8;  // on |Q(full) - Q(half panels)|
};

struct ChargeResult {
  double value = 0.0;
  double error_estimate = 0.0;  // |Q - Q computed with half the eta panels|
  double tail_estimate = 0.0;   // contribution of eta > eta_max
  bool converged = false;
};

// Whitehead integral (1/16 pi^2) \int C ^ F over the toroidal chart, with
// the regular gauge C = a (G - 2) dtheta + b G dpsi, G = 2 f^2/(1+f^2).
ChargeResult hopf_charge_whitehead(const AnsatzConfig& cfg, const ChargeQuadrature& quad = {});

// Closed polyline (samples + 1 points, last == first) on the torus
// eta = f^{-1}(R), oriented along grad R x grad Phi.
std::vector<Point3> preimage_curve(const AnsatzConfig& cfg, const SpherePoint& target,
                                   int samples);

// Gauss linking integral of two closed polylines, midpoint rule over segment
// pairs. A closing segment is added when last != first.
double linking_number(const std::vector<Point3>& c1, const std::vector<Point3>& c2);

struct LinkingResult {
  double value = 0.0;
  double last_change = 0.0;
  int samples = 0;
};

// Linking number of two preimage curves, doubling the sampling until the
// value changes by less than tol.
LinkingResult preimage_linking_number(const AnsatzConfig& cfg, const SpherePoint& t1,
                                      const SpherePoint& t2, int initial_samples = 64,
                                      double tol = 1e-3, int max_samples = 8192);

// Inverse of a monotone profile on [0, inf), by bisection.
double profile_inverse(const Profile& profile, double R);

}  // namespace hopfion

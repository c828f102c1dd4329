#pragma once

// Effective (acoustic-type) geometry seen by linearized waves on the static
// Q = 1 Hopf soliton, plus the principal-symbol algebra it comes from.

#include <array>
#include <vector>

#include "hopfion/hopf_map.hpp"
#include "hopfion/types.hpp"

namespace hopfion {

// Reciprocal effective metric (m^-1)^{ij} of the Q = 1 soliton in Cartesian
// components. Globally smooth and positive definite.
SymTensor3 inv_metric_cartesian(const Point3& x);

// Effective metric m_ij, the inverse of inv_metric_cartesian.
SymTensor3 metric_cartesian(const Point3& x);

// Closed-form reciprocal metric in the (eta, theta, psi) chart for an
// arbitrary ansatz. Requires eta > 0.
SymTensor3 inv_metric_toroidal(const AnsatzConfig& cfg, const ToroidalPoint& p);

// xi = 2 L_11 / L_1 for the Lagrangian density sigma_1^{3/2}.
double nicole_xi(double sigma1);

// g^-1 + xi L^{..} built from the pullback strain (flat spatial g).
SymTensor3 reciprocal_from_strain(const AnsatzConfig& cfg, const Point3& x);

// Closed-form Ricci scalar of metric_cartesian.
double ricci_scalar(const Point3& x);

// Metric derivatives by 4th-order central differences with step
// h_k = 1e-4 (1 + |x_k|).
struct MetricDerivatives {
  Mat3 metric;
  std::array<Mat3, 3> first;                 // d_k m
  std::array<std::array<Mat3, 3>, 3> second;  // d_k d_l m
};
MetricDerivatives metric_derivatives(const Point3& x, const MetricField& metric,
                                     bool with_second = true);

// Ricci scalar of an arbitrary metric field by finite differences.
double ricci_scalar_numeric(const Point3& x, const MetricField& metric);
double ricci_scalar_numeric(const Point3& x);

// Default metric field (metric_cartesian as a Mat3).
MetricField hopfion_metric_field();

struct RicciExtremum {
  Point3 location;
  double value = 0.0;
};

// Local maxima of ricci_scalar inside [lo, hi]^3: coarse lattice scan, then
// compass-search refinement down to step `tol`.
std::vector<RicciExtremum> locate_ricci_maxima(double lo, double hi, int n, double tol = 1e-9);

// 1+3 principal symbol M_ab(x, k) = P1 h_ab + xi (h dphi.k)_a (h dphi.k)_b of
// the static field equations, with Minkowski g = diag(-1, 1, 1, 1).
using Covector4 = Eigen::Vector4d;

struct SymbolBackground {
  Eigen::Matrix2d target_metric;             // h_ab at phi(x)
  Eigen::Matrix<double, 2, 4> map_gradient;  // d_a phi^alpha, row per alpha
  double xi = 0.0;
};

// Background for the ansatz at a Cartesian point (static: d_0 phi = 0).
SymbolBackground symbol_background(const AnsatzConfig& cfg, const Point3& x);

struct PrincipalSymbol {
  Eigen::Matrix2d M;
  Eigen::Matrix2d target_metric;
  double p1 = 0.0;  // g^{ab} k_a k_b
  double p2 = 0.0;  // (m^-1)^{ab} k_a k_b

  double determinant() const { return M.determinant(); }
  // Eigenvalues of h^-1 M, ascending.
  std::array<double, 2> mixed_eigenvalues() const;
};

PrincipalSymbol principal_symbol(const SymbolBackground& bg, const Covector4& k);

// lambda_{+-} = (P1 + P2)/2 +- |P1 - P2|/2, returned as {minus, plus}.
std::array<double, 2> characteristic_roots(double p1, double p2);

// Strain eigenvalues relative to g, squared: lambda_0^2 (time) and three
// spatial ones.
struct StrainEigenvalues {
  double l0 = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
};

enum class SignatureStatus { lorentzian, not_lorentzian, degenerate, vacuum };

struct LorentzianReport {
  bool lorentzian = false;
  SignatureStatus status = SignatureStatus::vacuum;
  // (m^-1)^{00}, ^{11}, ^{22}, ^{33} in the frame diagonalizing L; NaN when
  // sigma_1 = 0.
  std::array<double, 4> diagonal{};
};

LorentzianReport lorentzian_check(const StrainEigenvalues& ev);

}  // namespace hopfion

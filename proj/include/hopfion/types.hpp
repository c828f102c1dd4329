#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace hopfion {

// Positions and velocities live in dimensionless units of the soliton scale
// (the core ring has unit radius).
using Point3 = Eigen::Vector3d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Spatial metric field x -> g_ij(x). Used to inject alternative geometries
// (flat space, mutated metrics) into the finite-difference routines.
using MetricField = std::function<Mat3(const Point3&)>;

enum class Chart { cartesian, toroidal };

// Raised when a point lies outside the domain of a coordinate chart or of a
// formula that is singular there (z-axis, core ring, point at infinity).
class ChartDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when a numerical procedure cannot reach its stated accuracy.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Symmetric 3x3 tensor sample. Stores the six independent components, so it
// is symmetric by construction.
class SymTensor3 {
 public:
  SymTensor3() = default;
  SymTensor3(double xx, double xy, double xz, double yy, double yz, double zz,
             Chart chart = Chart::cartesian)
      : c_{xx, xy, xz, yy, yz, zz}, chart_(chart) {}

  // Takes the symmetric part of m.
  static SymTensor3 from_matrix(const Mat3& m, Chart chart = Chart::cartesian);
  static SymTensor3 identity(Chart chart = Chart::cartesian) {
    return {1, 0, 0, 1, 0, 1, chart};
  }

  double operator()(int i, int j) const { return c_[index(i, j)]; }
  Chart chart() const { return chart_; }
  Mat3 matrix() const;
  double trace() const { return c_[0] + c_[3] + c_[5]; }

  // Ascending eigenvalues.
  Eigen::Vector3d eigenvalues() const;
  bool is_positive_definite(double threshold = 1e-12) const;

 private:
  static constexpr int index(int i, int j) {
    if (i > j) std::swap(i, j);
    constexpr int row_start[3] = {0, 3, 5};
    return row_start[i] + (j - i);
  }

  std::array<double, 6> c_{};
  Chart chart_ = Chart::cartesian;
};

inline SymTensor3 SymTensor3::from_matrix(const Mat3& m, Chart chart) {
  const Mat3 s = 0.5 * (m + m.transpose());
  return {s(0, 0), s(0, 1), s(0, 2), s(1, 1), s(1, 2), s(2, 2), chart};
}

inline Mat3 SymTensor3::matrix() const {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = (*this)(i, j);
  return m;
}

inline Eigen::Vector3d SymTensor3::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Mat3> solver(matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

inline bool SymTensor3::is_positive_definite(double threshold) const {
  return eigenvalues()(0) > threshold;
}

}  // namespace hopfion

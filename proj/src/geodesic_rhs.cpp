#include <cmath>

#include "hopfion/effective_geometry.hpp"
#include "hopfion/geodesics.hpp"

namespace hopfion {

namespace {

double sq(double v) { return v * v; }
double cu(double v) { return v * v * v; }

// Geodesic equations as polynomials over (1 + r^2)^4. They are written for
// the soliton of opposite orientation, (x, y, z) -> (x, y, -z); rhs_closed_form
// maps in and out of that frame.
Vec3 mirrored_acceleration(double x, double y, double z, double vx, double vy, double vz) {
  const double x2 = x * x, x3 = x2 * x, x4 = x2 * x2, x5 = x4 * x, x6 = x3 * x3;
  const double y2 = y * y, y4 = y2 * y2, y6 = y4 * y2;
  const double z2 = z * z, z3 = z2 * z, z4 = z2 * z2, z5 = z4 * z, z6 = z3 * z3;
  const double P1 =
      -(x * z + y) * (z3 * (x2 + 2.0 * y2 + 2.0) - 3.0 * x * y * (x2 + y2 + 1.0) + z * (-2.0 * x4 - x2 * (y2 + 1.0) + y4 + 4.0 * y2 + 1.0) + x * y * z2 + z5);
  const double P2 =
      -(x * z + y) * (-2.0 * z2 * (x2 + 2.0 * y2 + 3.0) + 2.0 * x * y * z * (3.0 * x2 + 3.0 * y2 + 5.0) - 3.0 * sq(x2 + 1.0) + 2.0 * x * y * z3 + 3.0 * y4 - 3.0 * z4);
  const double P3 =
      (x * z + y) * (-2.0 * x * z2 * (x2 + y2 - 1.0) - 4.0 * y * z * (2.0 * x2 + 2.0 * y2 + 1.0) + 3.0 * x * sq(x2 + y2 + 1.0) - x * z4 - 4.0 * y * z3);
  const double P4 =
      x * z4 * (2.0 * x2 + y2 - 1.0) + 4.0 * y * z3 * (x2 + y2 + 2.0) + 3.0 * x * (y2 - 1.0) * (x2 + y2 + 1.0) + x * z2 * (x4 - (x2 + 5.0) * y2 + x2 - 2.0 * y4 - 5.0) + 2.0 * y * z * (2.0 * x4 + x2 * (y2 + 5.0) - y4 + y2 + 2.0) + x * z6 + 4.0 * y * z5;
  const double P5 =
      3.0 * x6 - 6.0 * x5 * y * z + x4 * (3.0 * y2 - z2 + 15.0) + 4.0 * x3 * y * z * (-3.0 * y2 + z2 - 7.0) + x2 * (-3.0 * y4 + 18.0 * y2 * (z2 + 1.0) + z4 + 10.0 * z2 + 9.0) - 2.0 * x * y * z * (3.0 * y4 - 2.0 * y2 * (z2 - 7.0) - z4 + 6.0 * z2 + 7.0) - 3.0 * y6 + y4 * (19.0 * z2 + 3.0) + y2 * (z2 + 1.0) * (11.0 * z2 + 3.0) - 3.0 * cu(z2 + 1.0);
  const double P6 =
      -x * z4 * (7.0 * x2 + 7.0 * y2 + 15.0) - 4.0 * y * z3 * (x2 + y2 - 3.0) + 3.0 * x * (x2 + y2 - 1.0) * (x2 + y2 + 1.0) * (x2 + y2 + 3.0) - x * z2 * (9.0 * x4 + 2.0 * x2 * (9.0 * y2 + 5.0) + 9.0 * y4 + 10.0 * y2 + 21.0) - 2.0 * y * z * (9.0 * x4 + 2.0 * x2 * (9.0 * y2 + 1.0) + 9.0 * y4 + 2.0 * y2 - 3.0) - 3.0 * x * z6 + 6.0 * y * z5;
  const double Q1 =
      y * z4 * (x2 + 2.0 * y2 - 1.0) - 4.0 * x * z3 * (x2 + y2 + 2.0) + 3.0 * (x2 - 1.0) * y * (x2 + y2 + 1.0) + y * z2 * (-2.0 * x4 - x2 * (y2 + 5.0) + y4 + y2 - 5.0) + 2.0 * x * z * (x4 - (x2 + 5.0) * y2 - x2 - 2.0 * y4 - 2.0) - 4.0 * x * z5 + y * z6;
  const double Q2 =
      (x - y * z) * (3.0 * x4 - 2.0 * z2 * (2.0 * x2 + y2 + 3.0) - 2.0 * x * y * z * (3.0 * x2 + 3.0 * y2 + 5.0) - 2.0 * x * y * z3 - 3.0 * sq(y2 + 1.0) - 3.0 * z4);
  const double Q3 =
      3.0 * x6 - 6.0 * x5 * y * z + x4 * (3.0 * y2 - 19.0 * z2 - 3.0) + 4.0 * x3 * y * z * (-3.0 * y2 + z2 - 7.0) - x2 * (3.0 * y4 + 18.0 * y2 * (z2 + 1.0) + 11.0 * z4 + 14.0 * z2 + 3.0) - 2.0 * x * y * z * (3.0 * y4 - 2.0 * y2 * (z2 - 7.0) - z4 + 6.0 * z2 + 7.0) - 3.0 * y6 + y4 * (z2 - 15.0) - y2 * (z2 + 1.0) * (z2 + 9.0) + 3.0 * cu(z2 + 1.0);
  const double Q4 =
      (x - y * z) * (z3 * (2.0 * x2 + y2 + 2.0) + 3.0 * x * y * (x2 + y2 + 1.0) + z * (x4 - (x2 + 1.0) * y2 + 4.0 * x2 - 2.0 * y4 + 1.0) - x * y * z2 + z5);
  const double Q5 =
      (x - y * z) * (-2.0 * y * z2 * (x2 + y2 - 1.0) + 4.0 * x * z * (2.0 * x2 + 2.0 * y2 + 1.0) + 3.0 * y * sq(x2 + y2 + 1.0) + 4.0 * x * z3 - y * z4);
  const double Q6 =
      -y * z4 * (7.0 * x2 + 7.0 * y2 + 15.0) + 4.0 * x * z3 * (x2 + y2 - 3.0) + 3.0 * y * (x2 + y2 - 1.0) * (x2 + y2 + 1.0) * (x2 + y2 + 3.0) - y * z2 * (9.0 * x4 + 2.0 * x2 * (9.0 * y2 + 5.0) + 9.0 * y4 + 10.0 * y2 + 21.0) + 2.0 * x * z * (9.0 * x4 + 2.0 * x2 * (9.0 * y2 + 1.0) + 9.0 * y4 + 2.0 * y2 - 3.0) - 6.0 * x * z5 - 3.0 * y * z6;
  const double R1 =
      x6 * z + x4 * z * (3.0 * y2 + 9.0 * z2 + 13.0) + 4.0 * x3 * y * (z2 + 3.0) + x2 * z * (3.0 * y4 + 10.0 * y2 * (z2 + 1.0) + 3.0 * z4 + 14.0 * z2 + 11.0) + 4.0 * x * y * (y2 * (z2 + 3.0) - z4 + 2.0 * z2 + 3.0) + z * (y6 + y4 * (z2 - 3.0) - y2 * (z2 + 1.0) * (z2 + 9.0) - cu(z2 + 1.0));
  const double R2 =
      x4 * (z2 + 3.0) - 4.0 * x3 * y * z * (z2 + 2.0) + x2 * (-z4 + 2.0 * z2 + 3.0) - 2.0 * x * y * z * (2.0 * y2 * (z2 + 2.0) + z4 + 6.0 * z2 + 5.0) - y2 * (y2 * (z2 + 3.0) - z4 + 2.0 * z2 + 3.0);
  const double R3 =
      (x2 + y2 - z2 - 1.0) * (x * z2 * (4.0 * x2 + 4.0 * y2 + 5.0) + y * z * (x2 + y2 - 1.0) + 3.0 * x * (x2 + y2 + 1.0) + 2.0 * x * z4 - y * z3);
  const double R4 =
      x6 * z + x4 * z * (3.0 * y2 + z2 - 3.0) - 4.0 * x3 * y * (z2 + 3.0) - x2 * z * (-3.0 * y4 - 10.0 * y2 * (z2 + 1.0) + z4 + 10.0 * z2 + 9.0) - 4.0 * x * y * (y2 * (z2 + 3.0) - z4 + 2.0 * z2 + 3.0) + z * (y6 + y4 * (9.0 * z2 + 13.0) + y2 * (z2 + 1.0) * (3.0 * z2 + 11.0) - cu(z2 + 1.0));
  const double R5 =
      (-1.0 + x2 + y2 - z2) * (-3.0 * y * (1.0 + x2 + y2) + x * (-1.0 + x2 + y2) * z - y * (5.0 + 4.0 * x2 + 4.0 * y2) * z2 - x * z3 - 2.0 * y * z4);
  const double R6 =
      z * (x2 + y2) * (x2 + y2 - z2 - 1.0) * (3.0 * x2 + 3.0 * y2 + z2 + 1.0);

  const double D4 = sq(sq(1.0 + x2 + y2 + z2));
  const double xx = vx * vx, xy = vx * vy, xz = vx * vz, yy = vy * vy, yz = vy * vz, zz = vz * vz;
  const double ax = (4.0 / 3.0) * P1 * xx - (4.0 / 3.0) * P2 * xy - (4.0 / 3.0) * P3 * xz -
                    (4.0 / 3.0) * P4 * yy + (2.0 / 3.0) * P5 * yz + (1.0 / 3.0) * P6 * zz;
  const double ay = -(4.0 / 3.0) * Q1 * xx + (4.0 / 3.0) * Q2 * xy + (2.0 / 3.0) * Q3 * xz +
                    (4.0 / 3.0) * Q4 * yy + (4.0 / 3.0) * Q5 * yz + (1.0 / 3.0) * Q6 * zz;
  const double az = (2.0 / 3.0) * R1 * xx - (8.0 / 3.0) * R2 * xy - (4.0 / 3.0) * R3 * xz +
                    (2.0 / 3.0) * R4 * yy + (4.0 / 3.0) * R5 * yz + (2.0 / 3.0) * R6 * zz;
  return Vec3(ax, ay, az) / D4;
}

}  // namespace

Vec3 rhs_closed_form(const GeodesicState& s) {
  const Point3& p = s.position;
  const Vec3& v = s.velocity;
  Vec3 a = mirrored_acceleration(p.x(), p.y(), -p.z(), v.x(), v.y(), -v.z());
  a.z() = -a.z();
  return a;
}

std::array<Mat3, 3> christoffel_numeric(const Point3& x, const MetricField& metric) {
  const MetricDerivatives d = metric_derivatives(x, metric, false);
  const Mat3 inv = d.metric.inverse();
  std::array<Mat3, 3> gamma;
  for (int i = 0; i < 3; ++i) {
    gamma[i].setZero();
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          gamma[i](j, k) +=
              0.5 * inv(i, l) * (d.first[j](l, k) + d.first[k](l, j) - d.first[l](j, k));
  }
  return gamma;
}

Vec3 rhs_christoffel(const GeodesicState& s, const MetricField& metric) {
  const auto gamma = christoffel_numeric(s.position, metric);
  Vec3 a;
  for (int i = 0; i < 3; ++i) a(i) = -s.velocity.dot(gamma[i] * s.velocity);
  return a;
}

Vec3 rhs_christoffel(const GeodesicState& s) {
  return rhs_christoffel(s, hopfion_metric_field());
}

}  // namespace hopfion

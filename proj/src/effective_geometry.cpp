#include "hopfion/effective_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hopfion {

SymTensor3 inv_metric_cartesian(const Point3& p) {
  const double x = p.x(), y = p.y(), z = p.z();
  const double r2 = x * x + y * y + z * z;
  const double D = (1.0 + r2) * (1.0 + r2);
  const double A = y - x * z;
  const double B = x + y * z;
  const double C = x * x + y * y - z * z - 1.0;
  const double zz1 = z * z + 1.0;
  const double m33 =
      (x * x * x * x + 2.0 * x * x * (y * y + 2.0 * z * z + 2.0) + y * y * y * y +
       4.0 * y * y * zz1 + zz1 * zz1) / D;
  return {1.5 - 2.0 * A * A / D, 2.0 * A * B / D, -A * C / D,
          1.5 - 2.0 * B * B / D, B * C / D, m33};
}

SymTensor3 metric_cartesian(const Point3& p) {
  const double x = p.x(), y = p.y(), z = p.z();
  const double r2 = x * x + y * y + z * z;
  const double den = 3.0 * (1.0 + r2) * (1.0 + r2);
  const double A = y - x * z;
  const double B = x + y * z;
  const double C = x * x + y * y - z * z - 1.0;
  const double x2 = x * x, y2 = y * y, z2 = z * z;
  const double zz1 = z2 + 1.0;
  const double m11 = 2.0 * (x2 * x2 + 2.0 * x2 * (y2 + 2.0 * z2 + 1.0) - 4.0 * x * y * z +
                            y2 * y2 + 2.0 * y2 * (z2 + 2.0) + zz1 * zz1) / den;
  const double m22 = 2.0 * (x2 * x2 + 2.0 * x2 * (y2 + z2 + 2.0) + 4.0 * x * y * z + y2 * y2 +
                            y2 * (4.0 * z2 + 2.0) + zz1 * zz1) / den;
  const double m33 = 1.0 - 4.0 * zz1 * (x2 + y2) / den;
  return {m11, -4.0 * A * B / den, 2.0 * A * C / den, m22, -2.0 * B * C / den, m33};
}

SymTensor3 inv_metric_toroidal(const AnsatzConfig& cfg, const ToroidalPoint& p) {
  if (!(p.eta > 0.0) || !std::isfinite(p.eta))
    throw ChartDomainError("inv_metric_toroidal: eta must be > 0");
  const double s = std::sinh(p.eta);
  const double q = std::cosh(p.eta) - std::cos(p.theta);
  const double f = cfg.profile.value(p.eta);
  const double g = cfg.profile.derivative(p.eta) / f;
  const double a = cfg.a, b = cfg.b;
  const double s2 = s * s;
  const double delta2 = g * g + a * a + b * b / s2;
  const double q2 = q * q;
  return {q2 * (1.0 + g * g / delta2), 0.0, 0.0,
          q2 * (1.0 + a * a / delta2), q2 * a * b / (s2 * delta2),
          q2 * (1.0 / s2 + b * b / (s2 * s2 * delta2)), Chart::toroidal};
}

double nicole_xi(double sigma1) {
  if (!(sigma1 > 0.0)) throw ChartDomainError("nicole_xi: sigma_1 must be positive");
  // L = sigma^{3/2}
  const double L1 = 1.5 * std::sqrt(sigma1);
  const double L11 = 0.75 / std::sqrt(sigma1);
  return 2.0 * L11 / L1;
}

SymTensor3 reciprocal_from_strain(const AnsatzConfig& cfg, const Point3& x) {
  const StrainSample s = strain(cfg, x);
  const double xi = nicole_xi(s.L.trace());
  return SymTensor3::from_matrix(Mat3::Identity() + xi * s.L.matrix());
}

double ricci_scalar(const Point3& p) {
  const double x2 = p.x() * p.x(), y2 = p.y() * p.y(), z2 = p.z() * p.z();
  const double d = 1.0 + x2 + y2 + z2;
  return -(4.0 * x2 + 4.0 * y2 - 8.0 * z2 + 2.0) / (d * d);
}

MetricField hopfion_metric_field() {
  return [](const Point3& x) { return metric_cartesian(x).matrix(); };
}

MetricDerivatives metric_derivatives(const Point3& x, const MetricField& metric, bool with_second) {
  if (!x.allFinite()) throw ChartDomainError("metric_derivatives: non-finite point");
  std::array<double, 3> h{};
  for (int k = 0; k < 3; ++k) {
    h[k] = 1e-4 * (1.0 + std::abs(x(k)));
    if (x(k) + h[k] == x(k)) throw AccuracyError("metric_derivatives: finite-difference step underflow");
  }
  auto at = [&](int k, double sk, int l = 0, double sl = 0.0) {
    Point3 y = x;
    y(k) += sk * h[k];
    y(l) += sl * h[l];
    return metric(y);
  };

  MetricDerivatives d;
  d.metric = metric(x);
  for (int k = 0; k < 3; ++k)
    d.first[k] = (-at(k, 2) + 8.0 * at(k, 1) - 8.0 * at(k, -1) + at(k, -2)) / (12.0 * h[k]);
  if (!with_second) return d;

  static constexpr std::array<std::pair<double, double>, 4> stencil{
      {{2.0, -1.0}, {1.0, 8.0}, {-1.0, -8.0}, {-2.0, 1.0}}};
  for (int k = 0; k < 3; ++k) {
    d.second[k][k] = (-at(k, 2) + 16.0 * at(k, 1) - 30.0 * d.metric + 16.0 * at(k, -1) - at(k, -2)) /
                     (12.0 * h[k] * h[k]);
    for (int l = k + 1; l < 3; ++l) {
      Mat3 acc = Mat3::Zero();
      for (const auto& [sk, ck] : stencil)
        for (const auto& [sl, cl] : stencil) acc += ck * cl * at(k, sk, l, sl);
      d.second[k][l] = acc / (144.0 * h[k] * h[l]);
      d.second[l][k] = d.second[k][l];
    }
  }
  return d;
}

double ricci_scalar_numeric(const Point3& x, const MetricField& metric) {
  const MetricDerivatives d = metric_derivatives(x, metric, true);
  const Mat3 inv = d.metric.inverse();
  std::array<Mat3, 3> dinv;
  for (int p = 0; p < 3; ++p) dinv[p] = -inv * d.first[p] * inv;

  // Gamma^i_jk and its derivative d_p Gamma^i_jk
  double G[3][3][3] = {};
  double dG[3][3][3][3] = {};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const double lower = d.first[j](l, k) + d.first[k](l, j) - d.first[l](j, k);
          G[i][j][k] += 0.5 * inv(i, l) * lower;
          for (int p = 0; p < 3; ++p) {
            const double dlower = d.second[p][j](l, k) + d.second[p][k](l, j) - d.second[p][l](j, k);
            dG[p][i][j][k] += 0.5 * (dinv[p](i, l) * lower + inv(i, l) * dlower);
          }
        }

  double R = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      double ric = 0.0;
      for (int i = 0; i < 3; ++i) {
        ric += dG[i][i][j][k] - dG[k][i][j][i];
        for (int p = 0; p < 3; ++p) ric += G[i][i][p] * G[p][j][k] - G[i][k][p] * G[p][j][i];
      }
      R += inv(j, k) * ric;
    }
  return R;
}

double ricci_scalar_numeric(const Point3& x) {
  return ricci_scalar_numeric(x, hopfion_metric_field());
}

std::vector<RicciExtremum> locate_ricci_maxima(double lo, double hi, int n, double tol) {
  if (n < 3 || !(hi > lo)) throw std::invalid_argument("locate_ricci_maxima: need n >= 3 and hi > lo");
  const double spacing = (hi - lo) / (n - 1);
  auto node = [&](int i, int j, int k) {
    return Point3(lo + i * spacing, lo + j * spacing, lo + k * spacing);
  };

  std::vector<RicciExtremum> found;
  for (int i = 1; i < n - 1; ++i)
    for (int j = 1; j < n - 1; ++j)
      for (int k = 1; k < n - 1; ++k) {
        const double v = ricci_scalar(node(i, j, k));
        bool is_max = true;
        for (int di = -1; di <= 1 && is_max; ++di)
          for (int dj = -1; dj <= 1 && is_max; ++dj)
            for (int dk = -1; dk <= 1 && is_max; ++dk)
              if ((di || dj || dk) && ricci_scalar(node(i + di, j + dj, k + dk)) > v) is_max = false;
        if (!is_max) continue;

        Point3 x = node(i, j, k);
        double best = v;
        double step = 0.5 * spacing;
        while (step > tol) {
          bool moved = false;
          for (int axis = 0; axis < 3; ++axis)
            for (double sgn : {1.0, -1.0}) {
              Point3 trial = x;
              trial(axis) += sgn * step;
              const double tv = ricci_scalar(trial);
              if (tv > best) {
                best = tv;
                x = trial;
                moved = true;
              }
            }
          if (!moved) step *= 0.5;
        }
        const bool duplicate = std::any_of(found.begin(), found.end(), [&](const RicciExtremum& e) {
          return (e.location - x).norm() < 1e-4;
        });
        if (!duplicate) found.push_back({x, best});
      }
  return found;
}

SymbolBackground symbol_background(const AnsatzConfig& cfg, const Point3& x) {
  const MapGradient g = map_gradient(cfg, x);
  const double R = g.value.R;
  if (!(R > 0.0) || !std::isfinite(R))
    throw ChartDomainError("symbol_background: target metric degenerates at the poles");
  const double conf = 4.0 / ((1.0 + R * R) * (1.0 + R * R));

  SymbolBackground bg;
  bg.target_metric << conf, 0.0, 0.0, conf * R * R;
  bg.map_gradient.setZero();
  bg.map_gradient.block<1, 3>(0, 1) = g.dR.transpose();
  bg.map_gradient.block<1, 3>(1, 1) = g.dPhi.transpose();
  const double sigma = bg.target_metric(0, 0) * g.dR.squaredNorm() +
                       bg.target_metric(1, 1) * g.dPhi.squaredNorm();
  bg.xi = nicole_xi(sigma);
  return bg;
}

std::array<double, 2> PrincipalSymbol::mixed_eigenvalues() const {
  const Eigen::Matrix2d mixed = target_metric.inverse() * M;
  const double tr = mixed.trace();
  const double det = mixed.determinant();
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  return {0.5 * tr - disc, 0.5 * tr + disc};
}

PrincipalSymbol principal_symbol(const SymbolBackground& bg, const Covector4& k) {
  const Eigen::Vector4d ginv_diag(-1.0, 1.0, 1.0, 1.0);
  const Eigen::Matrix4d ginv = ginv_diag.asDiagonal();
  const Eigen::Matrix2d& h = bg.target_metric;

  PrincipalSymbol sym;
  sym.target_metric = h;
  sym.p1 = k.dot(ginv * k);
  // w^alpha = d^a phi^alpha k_a
  const Eigen::Vector2d w = bg.map_gradient * ginv * k;
  const Eigen::Vector2d hw = h * w;
  sym.M = sym.p1 * h + bg.xi * hw * hw.transpose();

  // 1+3 reciprocal metric g^{ab} + xi L^{ab}, L^{ab} = d^a phi . h . d^b phi
  const Eigen::Matrix4d L_up = ginv * bg.map_gradient.transpose() * h * bg.map_gradient * ginv;
  sym.p2 = k.dot((ginv + bg.xi * L_up) * k);
  return sym;
}

std::array<double, 2> characteristic_roots(double p1, double p2) {
  const double mean = 0.5 * (p1 + p2);
  const double half_gap = 0.5 * std::abs(p1 - p2);
  return {mean - half_gap, mean + half_gap};
}

LorentzianReport lorentzian_check(const StrainEigenvalues& ev) {
  if (ev.l0 < 0.0 || ev.l1 < 0.0 || ev.l2 < 0.0 || ev.l3 < 0.0)
    throw std::invalid_argument("lorentzian_check: strain eigenvalues must be nonnegative");

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  LorentzianReport rep;
  const double spatial = ev.l1 + ev.l2 + ev.l3;
  const double sigma = -ev.l0 + spatial;
  if (ev.l0 == 0.0 && spatial == 0.0) {
    rep.status = SignatureStatus::vacuum;
    rep.diagonal = {nan, nan, nan, nan};
    return rep;
  }
  if (sigma == 0.0) {
    rep.status = SignatureStatus::degenerate;
    rep.diagonal = {nan, nan, nan, nan};
    return rep;
  }
  rep.diagonal = {(2.0 * ev.l0 - spatial) / sigma, (-ev.l0 + 2.0 * ev.l1 + ev.l2 + ev.l3) / sigma,
                  (-ev.l0 + ev.l1 + 2.0 * ev.l2 + ev.l3) / sigma,
                  (-ev.l0 + ev.l1 + ev.l2 + 2.0 * ev.l3) / sigma};
  const double gap = spatial - 2.0 * ev.l0;
  if (std::abs(gap) <= 1e-12 * spatial)
    rep.status = SignatureStatus::degenerate;
  else
    rep.status = gap > 0.0 ? SignatureStatus::lorentzian : SignatureStatus::not_lorentzian;
  rep.lorentzian = rep.status == SignatureStatus::lorentzian;
  return rep;
}

}  // namespace hopfion

#include "hopfion/hopf_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "hopfion/quadrature.hpp"

namespace hopfion {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double central_first(const Profile::Fn& f, double x) {
  const double h = 1e-4 * std::max(1.0, x);
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

double central_second(const Profile::Fn& f, double x) {
  const double h = 1e-4 * std::max(1.0, x);
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
         (12 * h * h);
}

// Handedness of the (eta, theta, psi) frame relative to (x, y, z).
double chart_orientation(const ToroidalPoint& p) {
  return toroidal_jacobian(p).determinant() > 0.0 ? 1.0 : -1.0;
}

// Sign convention for the Whitehead integral and preimage orientation,
// chosen so that a = b = 1 carries charge +1.
constexpr double kChargeConvention = 1.0;

}  // namespace

ToroidalPoint ToroidalPoint::normalized() const {
  return {eta, wrap_angle(theta), wrap_angle(psi)};
}

Vec3 SpherePoint::unit_vector() const {
  const double d = 1.0 + R * R;
  return {2.0 * R * std::cos(Phi) / d, 2.0 * R * std::sin(Phi) / d, (1.0 - R * R) / d};
}

Profile Profile::sinh_exact() {
  return from_functions([](double e) { return std::sinh(e); },
                        [](double e) { return std::cosh(e); },
                        [](double e) { return std::sinh(e); }, "sinh");
}

Profile Profile::from_function(Fn f, std::string name) {
  Profile p;
  p.f_ = std::move(f);
  p.name_ = std::move(name);
  return p;
}

Profile Profile::from_functions(Fn f, Fn df, Fn d2f, std::string name) {
  Profile p;
  p.f_ = std::move(f);
  p.df_ = std::move(df);
  p.d2f_ = std::move(d2f);
  p.name_ = std::move(name);
  return p;
}

double Profile::derivative(double eta) const {
  return df_ ? df_(eta) : central_first(f_, eta);
}

double Profile::second_derivative(double eta) const {
  if (d2f_) return d2f_(eta);
  if (df_) return central_first(df_, eta);
  return central_second(f_, eta);
}

double profile_inverse(const Profile& profile, double R) {
  if (!(R > 0.0) || !std::isfinite(R))
    throw ChartDomainError("profile_inverse: target radius must be positive and finite");
  double lo = 0.0, hi = 1.0;
  while (profile.value(hi) < R) {
    lo = hi;
    hi *= 2.0;
    if (hi > 700.0) throw ChartDomainError("profile_inverse: radius beyond profile range");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (profile.value(mid) < R ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Point3 toroidal_to_cartesian(const ToroidalPoint& p) {
  if (!std::isfinite(p.eta) || !std::isfinite(p.theta) || !std::isfinite(p.psi) || p.eta < 0.0)
    throw ChartDomainError("toroidal_to_cartesian: eta must be finite and >= 0");
  const double q = std::cosh(p.eta) - std::cos(p.theta);
  if (!(q > 0.0))
    throw ChartDomainError("toroidal_to_cartesian: (eta=0, theta=0) is the point at infinity");
  const double s = std::sinh(p.eta);
  return {s * std::cos(p.psi) / q, s * std::sin(p.psi) / q, std::sin(p.theta) / q};
}

ToroidalPoint cartesian_to_toroidal(const Point3& x) {
  if (!x.allFinite()) throw ChartDomainError("cartesian_to_toroidal: non-finite point");
  const double rho = std::hypot(x.x(), x.y());
  const double z = x.z();
  const double d2sq = (rho - 1.0) * (rho - 1.0) + z * z;
  if (d2sq == 0.0) throw ChartDomainError("cartesian_to_toroidal: point lies on the core ring");
  ToroidalPoint p;
  p.eta = 0.5 * std::log1p(4.0 * rho / d2sq);
  if (!std::isfinite(p.eta))
    throw ChartDomainError("cartesian_to_toroidal: point too close to the core ring");
  p.theta = wrap_angle(std::atan2(2.0 * z, rho * rho + z * z - 1.0));
  p.psi = rho > 0.0 ? wrap_angle(std::atan2(x.y(), x.x())) : 0.0;
  return p;
}

Mat3 toroidal_jacobian(const ToroidalPoint& p) {
  const double ch = std::cosh(p.eta), sh = std::sinh(p.eta);
  const double ct = std::cos(p.theta), st = std::sin(p.theta);
  const double cp = std::cos(p.psi), sp = std::sin(p.psi);
  const double q = ch - ct;
  if (!(q > 0.0)) throw ChartDomainError("toroidal_jacobian: point at infinity");
  const double q2 = q * q;
  Mat3 J;
  J << cp * (1.0 - ch * ct) / q2, -sh * cp * st / q2, -sh * sp / q,
       sp * (1.0 - ch * ct) / q2, -sh * sp * st / q2, sh * cp / q,
       -st * sh / q2, (ct * ch - 1.0) / q2, 0.0;
  return J;
}

SpherePoint ansatz_map(const AnsatzConfig& cfg, const ToroidalPoint& p) {
  return {cfg.profile.value(p.eta), wrap_angle(cfg.a * p.theta + cfg.b * p.psi)};
}

double profile_residual(const AnsatzConfig& cfg, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw ChartDomainError("profile_residual: eta must be > 0");
  const double f = cfg.profile.value(eta);
  if (f == 0.0) throw ChartDomainError("profile_residual: profile vanishes at eta > 0");
  const double fp = cfg.profile.derivative(eta);
  const double fpp = cfg.profile.second_derivative(eta);
  const double s = std::sinh(eta), c = std::cosh(eta);
  const double a2 = double(cfg.a) * cfg.a, b2 = double(cfg.b) * cfg.b;
  const double W = a2 + b2 / (s * s);
  const double g = fp / f;
  const double delta = std::sqrt(g * g + W);
  const double ddelta = (g * (fpp / f - g * g) - b2 * c / (s * s * s)) / delta;
  const double opf = 1.0 + f * f;

  // X = Delta sinh f f' / (1+f^2), differentiated term by term
  const double dX = (ddelta * s * f * fp + delta * c * f * fp + delta * s * (fp * fp + f * fpp)) / opf -
                    2.0 * delta * s * f * f * fp * fp / (opf * opf);
  const double lhs = opf / (delta * s * f * f) * dX;
  const double rhs = (2.0 * fp * fp + (1.0 - f * f) * W) / opf;
  return lhs - rhs;
}

double sigma1(const AnsatzConfig& cfg, const ToroidalPoint& p) {
  if (!(p.eta > 0.0) || !std::isfinite(p.eta))
    throw ChartDomainError("sigma1: eta must be > 0");
  const double q = std::cosh(p.eta) - std::cos(p.theta);
  const double s = std::sinh(p.eta);
  const double f = cfg.profile.value(p.eta);
  const double fp = cfg.profile.derivative(p.eta);
  const double W = double(cfg.a) * cfg.a + double(cfg.b) * cfg.b / (s * s);
  // f^2 Delta^2 = f'^2 + f^2 W, which stays finite where f -> 0
  const double opf = 1.0 + f * f;
  return 4.0 * q * q * (fp * fp + f * f * W) / (opf * opf);
}

MapGradient map_gradient(const AnsatzConfig& cfg, const Point3& x) {
  const ToroidalPoint p = cartesian_to_toroidal(x);
  if (p.eta == 0.0) throw ChartDomainError("map_gradient: point lies on the z-axis");
  const Mat3 J = toroidal_jacobian(p);
  const double q = std::cosh(p.eta) - std::cos(p.theta);
  const double s = std::sinh(p.eta);
  const Vec3 grad_eta = q * q * J.col(0);
  const Vec3 grad_theta = q * q * J.col(1);
  const Vec3 grad_psi = (q * q / (s * s)) * J.col(2);

  MapGradient g;
  g.value = ansatz_map(cfg, p);
  g.dR = cfg.profile.derivative(p.eta) * grad_eta;
  g.dPhi = cfg.a * grad_theta + cfg.b * grad_psi;
  return g;
}

StrainSample strain(const AnsatzConfig& cfg, const Point3& x) {
  const ToroidalPoint p = cartesian_to_toroidal(x);
  const Mat3 J = toroidal_jacobian(p);
  const double q = std::cosh(p.eta) - std::cos(p.theta);
  const double f = cfg.profile.value(p.eta);
  const double fp = cfg.profile.derivative(p.eta);
  // R grad(Phi) stays finite on the z-axis: R grad(psi) = (f / sinh) q e_psi
  const double f_over_sinh = p.eta > 0.0 ? f / std::sinh(p.eta) : fp;
  const Vec3 e_psi(-std::sin(p.psi), std::cos(p.psi), 0.0);
  const Vec3 dR = fp * q * q * J.col(0);
  const Vec3 R_dPhi = cfg.a * f * q * q * J.col(1) + cfg.b * f_over_sinh * q * e_psi;
  const double conformal = 4.0 / ((1.0 + f * f) * (1.0 + f * f));
  const Mat3 L = conformal * (dR * dR.transpose() + R_dPhi * R_dPhi.transpose());

  StrainSample out;
  out.L = SymTensor3::from_matrix(L);
  const Eigen::Vector3d ev = out.L.eigenvalues();
  for (int i = 0; i < 3; ++i) out.lambda_sq[i] = std::max(0.0, ev(i));
  return out;
}

ChargeResult hopf_charge_whitehead(const AnsatzConfig& cfg, const ChargeQuadrature& quad) {
  if (quad.eta_panels < 2 || quad.nodes_per_panel < 1 || quad.angular_nodes < 1 ||
      !(quad.eta_max > 0.0))
    throw std::invalid_argument("hopf_charge_whitehead: invalid quadrature options");

  const GaussRule radial = gauss_legendre(quad.nodes_per_panel);
  const GaussRule angular = gauss_legendre(quad.angular_nodes);
  const double a = cfg.a, b = cfg.b;

  // (C ^ F)_{eta theta psi} in chart components, times the chart handedness.
  auto density = [&](double eta, double theta, double psi) {
    const double R = cfg.profile.value(eta);
    const double opr = 1.0 + R * R;
    const double area = 4.0 * R / (opr * opr);
    const std::array<double, 3> dR{cfg.profile.derivative(eta), 0.0, 0.0};
    const std::array<double, 3> dPhi{0.0, a, b};
    auto F = [&](int j, int k) { return area * (dR[j] * dPhi[k] - dR[k] * dPhi[j]); };
    const double G = 2.0 * R * R / opr;
    const std::array<double, 3> C{0.0, a * (G - 2.0), b * G};
    const double wedge = C[0] * F(1, 2) + C[1] * F(2, 0) + C[2] * F(0, 1);
    return chart_orientation({eta, theta, psi}) * wedge;
  };

  auto integrate = [&](int panels) {
    const double width = quad.eta_max / panels;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
      const double lo = k * width;
      double panel = 0.0;
      for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        const double eta = lo + 0.5 * width * (radial.nodes[i] + 1.0);
        double ring = 0.0;
        for (std::size_t j = 0; j < angular.nodes.size(); ++j) {
          const double theta = std::numbers::pi * (angular.nodes[j] + 1.0);
          for (std::size_t l = 0; l < angular.nodes.size(); ++l) {
            const double psi = std::numbers::pi * (angular.nodes[l] + 1.0);
            ring += angular.weights[j] * angular.weights[l] * density(eta, theta, psi);
          }
        }
        panel += radial.weights[i] * ring * std::numbers::pi * std::numbers::pi;
      }
      total += panel * 0.5 * width;
    }
    return kChargeConvention * total / (16.0 * std::numbers::pi * std::numbers::pi);
  };

  ChargeResult res;
  res.value = integrate(quad.eta_panels);
  res.error_estimate = std::abs(res.value - integrate(quad.eta_panels / 2));
  const double f_max = cfg.profile.value(quad.eta_max);
  res.tail_estimate = std::abs(a * b) / (1.0 + f_max * f_max);
  res.converged = std::isfinite(res.value) && res.error_estimate <= quad.tolerance &&
                  res.tail_estimate <= quad.tolerance;
  return res;
}

std::vector<Point3> preimage_curve(const AnsatzConfig& cfg, const SpherePoint& target,
                                   int samples) {
  if (samples < 8) throw std::invalid_argument("preimage_curve: samples must be >= 8");
  if (cfg.a == 0 && cfg.b == 0)
    throw std::invalid_argument("preimage_curve: a = b = 0 has no closed preimage loops");
  if (!(target.R > 0.0) || !std::isfinite(target.R))
    throw ChartDomainError("preimage_curve: pole targets have degenerate preimages");

  const double eta = profile_inverse(cfg.profile, target.R);
  const int g = std::gcd(std::abs(cfg.a), std::abs(cfg.b));
  double theta0 = 0.0, psi0 = 0.0;
  if (cfg.a != 0)
    theta0 = target.Phi / cfg.a;
  else
    psi0 = target.Phi / cfg.b;

  // a*theta + b*psi stays constant along (-b, a); orient along grad R x grad Phi
  const double orient = kChargeConvention * chart_orientation({eta, theta0, psi0});
  const double dtheta = orient * kTwoPi * (-cfg.b) / g;
  const double dpsi = orient * kTwoPi * cfg.a / g;

  std::vector<Point3> curve;
  curve.reserve(samples + 1);
  for (int i = 0; i < samples; ++i) {
    const double s = double(i) / samples;
    curve.push_back(toroidal_to_cartesian({eta, theta0 + s * dtheta, psi0 + s * dpsi}));
  }
  curve.push_back(curve.front());
  return curve;
}

double linking_number(const std::vector<Point3>& c1, const std::vector<Point3>& c2) {
  auto segments = [](const std::vector<Point3>& c) {
    std::vector<std::pair<Point3, Vec3>> segs;  // (midpoint, direction)
    const std::size_t n = c.size();
    for (std::size_t i = 0; i + 1 < n; ++i) segs.emplace_back(0.5 * (c[i] + c[i + 1]), c[i + 1] - c[i]);
    if (n > 1 && (c.back() - c.front()).norm() > 1e-12)
      segs.emplace_back(0.5 * (c.back() + c.front()), c.front() - c.back());
    return segs;
  };
  const auto s1 = segments(c1);
  const auto s2 = segments(c2);
  if (s1.size() < 64 || s2.size() < 64)
    throw std::invalid_argument("linking_number: each curve needs at least 64 segments");

  double max_len = 0.0;
  for (const auto& s : s1) max_len = std::max(max_len, s.second.norm());
  for (const auto& s : s2) max_len = std::max(max_len, s.second.norm());

  double sum = 0.0, min_dist = std::numeric_limits<double>::infinity();
  for (const auto& [m1, d1] : s1) {
    for (const auto& [m2, d2] : s2) {
      const Vec3 r = m1 - m2;
      const double dist = r.norm();
      min_dist = std::min(min_dist, dist);
      sum += r.dot(d1.cross(d2)) / (dist * dist * dist);
    }
  }
  if (min_dist < max_len)
    throw AccuracyError("linking_number: curves closer than the segment length; refine the sampling");
  return sum / (4.0 * std::numbers::pi);
}

LinkingResult preimage_linking_number(const AnsatzConfig& cfg, const SpherePoint& t1,
                                      const SpherePoint& t2, int initial_samples, double tol,
                                      int max_samples) {
  LinkingResult res;
  int n = std::max(64, initial_samples);
  // Coarse samplings may not resolve the gap between the loops; refine first.
  auto link = [&](int samples, double& value) {
    try {
      value = linking_number(preimage_curve(cfg, t1, samples), preimage_curve(cfg, t2, samples));
      return true;
    } catch (const AccuracyError&) {
      return false;
    }
  };
  double prev = 0.0;
  bool have_prev = link(n, prev);
  while (true) {
    const int next = 2 * n;
    if (next > max_samples)
      throw AccuracyError("preimage_linking_number: no convergence within the sample limit");
    double cur = 0.0;
    const bool ok = link(next, cur);
    if (ok && have_prev) {
      res.last_change = std::abs(cur - prev);
      res.value = cur;
      res.samples = next;
      if (res.last_change < tol) return res;
    }
    prev = cur;
    have_prev = ok;
    n = next;
  }
}

}  // namespace hopfion

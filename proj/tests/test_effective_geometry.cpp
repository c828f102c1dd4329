#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hopfion/effective_geometry.hpp"

using namespace hopfion;

namespace {

Mat3 rot_z(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }

Point3 random_point(std::mt19937_64& rng, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  return {u(rng), u(rng), u(rng)};
}

// Least-squares factor c with a ~ c b, and the relative residual.
std::pair<double, double> proportionality(const Mat3& a, const Mat3& b) {
  const double c = (a.array() * b.array()).sum() / b.squaredNorm();
  return {c, (a - c * b).norm() / a.norm()};
}

double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Metric, OriginAndRingValues) {
  EXPECT_LT(max_abs(inv_metric_cartesian({0, 0, 0}).matrix() - Mat3(Vec3(1.5, 1.5, 1).asDiagonal())), 1e-15);
  EXPECT_LT(max_abs(inv_metric_cartesian({1, 0, 0}).matrix() - Mat3(Vec3(1.5, 1, 1.5).asDiagonal())), 1e-15);
  EXPECT_LT(max_abs(metric_cartesian({0, 0, 0}).matrix() - Mat3(Vec3(2.0 / 3, 2.0 / 3, 1).asDiagonal())),
            1e-15);
}

TEST(Metric, InverseIdentity) {
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Point3 x = random_point(rng, 10.0);
    worst = std::max(worst, max_abs(metric_cartesian(x).matrix() * inv_metric_cartesian(x).matrix() -
                                    Mat3::Identity()));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Metric, PositiveDefinite) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10000; ++i) {
    const Point3 x = random_point(rng, 10.0);
    ASSERT_TRUE(inv_metric_cartesian(x).is_positive_definite()) << x.transpose();
    ASSERT_TRUE(metric_cartesian(x).is_positive_definite()) << x.transpose();
  }
}

TEST(Metric, AxialSymmetry) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
  for (int i = 0; i < 200; ++i) {
    const Point3 x = random_point(rng, 5.0);
    const Mat3 R = rot_z(ang(rng));
    const Mat3 lhs = inv_metric_cartesian(R * x).matrix();
    const Mat3 rhs = R * inv_metric_cartesian(x).matrix() * R.transpose();
    EXPECT_LT(max_abs(lhs - rhs), 1e-12);
  }
}

TEST(Metric, HalfTurnAboutXAxis) {
  const Mat3 S = Vec3(1, -1, -1).asDiagonal();
  std::mt19937_64 rng(14);
  for (int i = 0; i < 200; ++i) {
    const Point3 x = random_point(rng, 5.0);
    EXPECT_LT(max_abs(inv_metric_cartesian(S * x).matrix() - S * inv_metric_cartesian(x).matrix() * S), 1e-12);
    EXPECT_LT(max_abs(metric_cartesian(S * x).matrix() - S * metric_cartesian(x).matrix() * S), 1e-12);
  }
}

TEST(Metric, NotMirrorSymmetricInZ) {
  // The soliton has a handedness: z -> -z alone is not a symmetry.
  const Mat3 M = Vec3(1, 1, -1).asDiagonal();
  const Point3 x(0.7, 0.3, 0.5);
  EXPECT_GT(max_abs(inv_metric_cartesian(M * x).matrix() - M * inv_metric_cartesian(x).matrix() * M), 1e-2);
}

TEST(Metric, ReciprocalFromStrainIsProportional) {
  const AnsatzConfig cfg;
  std::mt19937_64 rng(15);
  for (int i = 0; i < 200; ++i) {
    const Point3 x = random_point(rng, 4.0);
    const auto [c, resid] = proportionality(reciprocal_from_strain(cfg, x).matrix(),
                                            inv_metric_cartesian(x).matrix());
    EXPECT_LT(resid, 1e-8);
    EXPECT_NEAR(c, 1.0, 1e-8);  // observed conformal factor
  }
}

TEST(Metric, NicoleXi) {
  for (double s : {0.1, 1.0, 7.5}) {
    EXPECT_NEAR(nicole_xi(s) * s, 1.0, 1e-14);
    // 2 L''/L' for L = s^{3/2} by finite differences
    const double h = 1e-4 * s;
    auto L = [](double v) { return std::pow(v, 1.5); };
    const double d1 = (L(s + h) - L(s - h)) / (2 * h);
    const double d2 = (L(s + h) - 2 * L(s) + L(s - h)) / (h * h);
    EXPECT_NEAR(nicole_xi(s), 2 * d2 / d1, 1e-6 * nicole_xi(s));
  }
  EXPECT_THROW(nicole_xi(0.0), ChartDomainError);
}

TEST(ToroidalMetric, BlockStructure) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> eta(0.05, 4.0), ang(0.0, 2 * std::numbers::pi);
  for (int i = 0; i < 100; ++i) {
    const SymTensor3 m = inv_metric_toroidal(AnsatzConfig{2, 1, Profile::sinh_exact()},
                                             {eta(rng), ang(rng), ang(rng)});
    EXPECT_EQ(m(0, 1), 0.0);
    EXPECT_EQ(m(0, 2), 0.0);
    EXPECT_EQ(m.chart(), Chart::toroidal);
  }
  const SymTensor3 m = inv_metric_toroidal(AnsatzConfig{}, {1.0, std::numbers::pi / 2, 0.0});
  EXPECT_TRUE(m.is_positive_definite());
  EXPECT_THROW(inv_metric_toroidal(AnsatzConfig{}, {0.0, 1.0, 1.0}), ChartDomainError);
}

TEST(ToroidalMetric, JacobianTransformAgreesWithCartesian) {
  const AnsatzConfig cfg;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> eta(0.05, 4.0), ang(0.0, 2 * std::numbers::pi);
  for (int i = 0; i < 100; ++i) {
    const ToroidalPoint p{eta(rng), ang(rng), ang(rng)};
    // contravariant components: (d xi / d x) m^-1 (d xi / d x)^T
    const Mat3 dxi = toroidal_jacobian(p).inverse();
    const Mat3 from_cartesian =
        dxi * inv_metric_cartesian(toroidal_to_cartesian(p)).matrix() * dxi.transpose();
    const auto [c, resid] = proportionality(inv_metric_toroidal(cfg, p).matrix(), from_cartesian);
    EXPECT_LT(resid, 1e-8);
    EXPECT_NEAR(c, 1.0, 1e-8);
  }
}

TEST(Ricci, ClosedFormLandmarks) {
  EXPECT_EQ(ricci_scalar({0, 0, 0}), -2.0);
  EXPECT_EQ(ricci_scalar({0, 0, 0.5}), 0.0);
  EXPECT_EQ(ricci_scalar({0, 0, -0.5}), 0.0);
  EXPECT_NEAR(ricci_scalar({0, 0, std::sqrt(1.5)}), 1.6, 1e-15);
}

TEST(Ricci, NumericMatchesClosedForm) {
  EXPECT_NEAR(ricci_scalar_numeric({0, 0, 0}), -2.0, 1e-3);
  const Point3 x(2, 1, -1);
  EXPECT_NEAR(ricci_scalar_numeric(x), ricci_scalar(x), 1e-3 * std::abs(ricci_scalar(x)));
  double worst = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) {
        const Point3 y(-3 + 1.5 * i, -3 + 1.5 * j, -3 + 1.5 * k);
        const double exact = ricci_scalar(y);
        worst = std::max(worst, std::abs(ricci_scalar_numeric(y) - exact) / std::max(std::abs(exact), 1e-3));
      }
  EXPECT_LT(worst, 1e-3);
}

TEST(Ricci, NumericOnKnownGeometries) {
  const MetricField flat = [](const Point3&) { return Mat3::Identity().eval(); };
  EXPECT_NEAR(ricci_scalar_numeric({0.3, -1, 2}, flat), 0.0, 1e-12);

  // Stereographic round unit 3-sphere: R = 6 everywhere.
  const MetricField sphere = [](const Point3& x) {
    const double c = 2.0 / (1.0 + x.squaredNorm());
    return (c * c * Mat3::Identity()).eval();
  };
  for (const Point3& x : {Point3(0, 0, 0), Point3(0.5, -0.2, 1.1), Point3(-2, 1, 0.3)})
    EXPECT_NEAR(ricci_scalar_numeric(x, sphere), 6.0, 1e-5);

  EXPECT_THROW(ricci_scalar_numeric({NAN, 0, 0}), ChartDomainError);
}

TEST(Ricci, GlobalMaximaOnTheAxis) {
  const auto maxima = locate_ricci_maxima(-3.0, 3.0, 31);
  ASSERT_FALSE(maxima.empty());
  double best = -INFINITY;
  for (const auto& m : maxima) best = std::max(best, m.value);
  std::vector<Point3> global;
  for (const auto& m : maxima)
    if (m.value > best - 1e-9) global.push_back(m.location);
  ASSERT_EQ(global.size(), 2u);
  std::sort(global.begin(), global.end(), [](const Point3& a, const Point3& b) { return a.z() < b.z(); });
  EXPECT_LT((global[0] - Point3(0, 0, -std::sqrt(1.5))).norm(), 1e-6);
  EXPECT_LT((global[1] - Point3(0, 0, std::sqrt(1.5))).norm(), 1e-6);
  EXPECT_NEAR(best, 1.6, 1e-12);
}

TEST(Symbol, DeterminantFactorizes) {
  const AnsatzConfig cfg;
  std::mt19937_64 rng(18);
  std::normal_distribution<double> g;
  for (int i = 0; i < 100; ++i) {
    const Point3 x = random_point(rng, 3.0);
    const Covector4 k(g(rng), g(rng), g(rng), g(rng));
    const PrincipalSymbol sym = principal_symbol(symbol_background(cfg, x), k);
    const double expected = sym.target_metric.determinant() * sym.p1 * sym.p2;
    EXPECT_NEAR(sym.determinant(), expected, 1e-10 * std::abs(expected));
  }
}

TEST(Symbol, EigenvaluesAreTheTwoQuadrics) {
  AnsatzConfig cfg;
  cfg.a = 2;
  std::mt19937_64 rng(19);
  std::normal_distribution<double> g;
  for (int i = 0; i < 100; ++i) {
    const Point3 x = random_point(rng, 3.0);
    const Covector4 k(g(rng), g(rng), g(rng), g(rng));
    const PrincipalSymbol sym = principal_symbol(symbol_background(cfg, x), k);
    const auto ev = sym.mixed_eigenvalues();
    const auto roots = characteristic_roots(sym.p1, sym.p2);
    const double scale = std::abs(sym.p1) + std::abs(sym.p2);
    EXPECT_NEAR(ev[0], roots[0], 1e-12 * scale);
    EXPECT_NEAR(ev[1], roots[1], 1e-12 * scale);
    EXPECT_NEAR(std::min(sym.p1, sym.p2), roots[0], 1e-15 * scale);
  }
}

TEST(Symbol, SecondQuadricIsTheReciprocalMetric) {
  const AnsatzConfig cfg;
  const Point3 x(0.4, -0.9, 0.6);
  const Covector4 k(0.3, 1.0, -0.5, 2.0);
  const PrincipalSymbol sym = principal_symbol(symbol_background(cfg, x), k);
  const Vec3 ks = k.tail<3>();
  EXPECT_NEAR(sym.p2, -k(0) * k(0) + ks.dot(inv_metric_cartesian(x).matrix() * ks), 1e-12);
  EXPECT_NEAR(sym.p1, -k(0) * k(0) + ks.squaredNorm(), 1e-15);
}

TEST(Symbol, VacuumNullCovectorGivesZero) {
  SymbolBackground bg;
  bg.target_metric = Eigen::Matrix2d::Identity() * 0.8;
  bg.map_gradient.setZero();
  bg.xi = 0.5;
  const PrincipalSymbol sym = principal_symbol(bg, Covector4(1, 1, 0, 0));
  EXPECT_EQ(sym.p1, 0.0);
  EXPECT_EQ(sym.p2, 0.0);
  EXPECT_LT(sym.M.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Symbol, PolesRejected) {
  EXPECT_THROW(symbol_background(AnsatzConfig{}, {0, 0, 1}), ChartDomainError);
  EXPECT_THROW(symbol_background(AnsatzConfig{}, {1, 0, 0}), ChartDomainError);
}

TEST(Lorentzian, Examples) {
  const LorentzianReport r = lorentzian_check({0.0, 0.2, 1.0, 3.0});
  EXPECT_TRUE(r.lorentzian);
  EXPECT_LT(r.diagonal[0], 0.0);
  for (int i = 1; i < 4; ++i) EXPECT_GT(r.diagonal[i], 0.0);

  const LorentzianReport no = lorentzian_check({1.0, 0.5, 0.5, 0.5});
  EXPECT_FALSE(no.lorentzian);
  EXPECT_EQ(no.status, SignatureStatus::not_lorentzian);

  const LorentzianReport edge = lorentzian_check({0.75, 0.5, 0.5, 0.5});
  EXPECT_FALSE(edge.lorentzian);
  EXPECT_EQ(edge.status, SignatureStatus::degenerate);

  const LorentzianReport vac = lorentzian_check({0, 0, 0, 0});
  EXPECT_FALSE(vac.lorentzian);
  EXPECT_EQ(vac.status, SignatureStatus::vacuum);
  EXPECT_TRUE(std::isnan(vac.diagonal[0]));

  EXPECT_THROW(lorentzian_check({-1, 1, 1, 1}), std::invalid_argument);
}

TEST(Lorentzian, DiagonalMatchesReciprocalMetric) {
  // g^-1 + xi L in the eigenframe, xi = 1/sigma_1 with sigma_1 = -l0 + l1 + l2 + l3
  const StrainEigenvalues ev{0.3, 0.4, 1.2, 2.0};
  const double sigma = -ev.l0 + ev.l1 + ev.l2 + ev.l3;
  const LorentzianReport r = lorentzian_check(ev);
  EXPECT_NEAR(r.diagonal[1], 1.0 + ev.l1 / sigma, 1e-15);
  EXPECT_NEAR(r.diagonal[3], 1.0 + ev.l3 / sigma, 1e-15);
  EXPECT_NEAR(r.diagonal[0], -1.0 + ev.l0 / sigma, 1e-15);
}

TEST(Lorentzian, StaticAnsatzAlwaysLorentzian) {
  std::mt19937_64 rng(20);
  for (const AnsatzConfig cfg : {AnsatzConfig{}, AnsatzConfig{2, 1, Profile::sinh_exact()}}) {
    for (int i = 0; i < 500; ++i) {
      const StrainSample s = strain(cfg, random_point(rng, 5.0));
      EXPECT_TRUE(lorentzian_check({0.0, s.lambda_sq[0], s.lambda_sq[1], s.lambda_sq[2]}).lorentzian);
    }
  }
}

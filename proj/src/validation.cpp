#include "hopfion/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hopfion/effective_geometry.hpp"
#include "hopfion/geodesics.hpp"
#include "hopfion/hopf_map.hpp"
#include "hopfion/io.hpp"

namespace hopfion {

namespace {

ValidationCheck make(std::string name, double dev, double tol, std::string detail = {}) {
  return {std::move(name), dev < tol, dev, tol, std::move(detail)};
}

ValidationCheck inverse_identity(std::mt19937_64& rng, int samples) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Point3 x(u(rng), u(rng), u(rng));
    const Mat3 prod = metric_cartesian(x).matrix() * inv_metric_cartesian(x).matrix();
    worst = std::max(worst, (prod - Mat3::Identity()).cwiseAbs().maxCoeff());
  }
  return make("inverse_identity", worst, 1e-10, "max |m m^-1 - I|, x in [-10,10]^3");
}

ValidationCheck rhs_agreement(std::mt19937_64& rng, int samples, const MetricField& metric) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Point3 x(u(rng), u(rng), u(rng));
    Vec3 d(g(rng), g(rng), g(rng));
    const GeodesicState s{x, normalize_velocity(x, d, metric)};
    const Vec3 diff = rhs_closed_form(s) - rhs_christoffel(s, metric);
    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  return make("rhs_agreement", worst, 1e-6, "closed-form vs finite-difference Christoffel acceleration");
}

ValidationCheck curvature_oracle(const MetricField& metric) {
  double worst = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) {
        const Point3 x(-3.0 + 1.5 * i, -3.0 + 1.5 * j, -3.0 + 1.5 * k);
        const double exact = ricci_scalar(x);
        const double fd = ricci_scalar_numeric(x, metric);
        worst = std::max(worst, std::abs(fd - exact) / std::max(std::abs(exact), 1e-3));
      }
  return make("curvature_oracle", worst, 1e-3, "relative deviation, 5^3 grid on [-3,3]^3");
}

ValidationCheck profile_exactness() {
  const AnsatzConfig cfg;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double eta = 1e-3 * std::pow(1e4, i / 49.0);
    worst = std::max(worst, std::abs(profile_residual(cfg, eta)));
  }
  return make("profile_residual", worst, 1e-8, "f = sinh, a = b = 1, 50 log-spaced eta in [1e-3, 10]");
}

std::vector<ValidationCheck> charge_checks() {
  std::vector<ValidationCheck> out;
  for (auto [a, b] : {std::pair{1, 1}, std::pair{2, 1}}) {
    AnsatzConfig cfg;
    cfg.a = a;
    cfg.b = b;
    const double q = a * b;
    const ChargeResult w = hopf_charge_whitehead(cfg);
    const std::string tag = "(a=" + std::to_string(a) + ",b=" + std::to_string(b) + ")";
    out.push_back(make("charge_whitehead" + tag, std::abs(w.value - q) / q, 1e-2,
                       "relative to " + format_double(q) + ", value " + format_double(w.value)));
    const LinkingResult l = preimage_linking_number(cfg, {std::sinh(1.0), 0.5}, {std::sinh(0.7), 2.0});
    out.push_back(make("charge_linking" + tag, std::abs(l.value - q) / q, 1e-2,
                       "relative to " + format_double(q) + ", value " + format_double(l.value)));
  }
  return out;
}

}  // namespace

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

std::string ValidationReport::text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << "  max_dev=" << format_double(c.max_deviation)
       << " tol=" << format_double(c.tolerance);
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  os << (all_passed() ? "all checks passed" : "validation FAILED") << "\n";
  return os.str();
}

std::string ValidationReport::json() const {
  nlohmann::json j;
  j["passed"] = all_passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"max_deviation", c.max_deviation},
                           {"tolerance", c.tolerance},
                           {"detail", c.detail}});
  return j.dump(2) + "\n";
}

ValidationOptions default_validation_options() {
  ValidationOptions o;
  o.metric = hopfion_metric_field();
  return o;
}

ValidationReport run_validation(const ValidationOptions& opts) {
  const MetricField metric = opts.metric ? opts.metric : hopfion_metric_field();
  std::mt19937_64 rng(opts.seed);
  ValidationReport rep;
  rep.checks.push_back(inverse_identity(rng, opts.samples));
  rep.checks.push_back(rhs_agreement(rng, opts.samples, metric));
  rep.checks.push_back(curvature_oracle(metric));
  rep.checks.push_back(profile_exactness());
  if (opts.include_charge)
    for (auto& c : charge_checks()) rep.checks.push_back(std::move(c));
  return rep;
}

}  // namespace hopfion

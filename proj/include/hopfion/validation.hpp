#pragma once

// Cross-validation battery: every closed form checked against an independent
// route.

#include <cstdint>
#include <string>
#include <vector>

#include "hopfion/types.hpp"

namespace hopfion {

struct ValidationOptions {
  // Metric handed to the finite-difference routes (Christoffel, curvature).
  // Tests replace it with a mutated field to check that the battery notices.
  MetricField metric;
  std::uint64_t seed = 20240521;
  int samples = 1000;
  bool include_charge = true;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool all_passed() const;
  std::string text() const;
  std::string json() const;
};

ValidationOptions default_validation_options();
ValidationReport run_validation(const ValidationOptions& opts = default_validation_options());

}  // namespace hopfion

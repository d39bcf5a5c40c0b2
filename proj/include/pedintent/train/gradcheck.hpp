#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pedintent/train/model.hpp"

namespace pedintent {

// Central finite differences against the reverse-mode gradients of the
// multitask batch loss, parameter by parameter, on a synthetic toy batch.
struct GradCheckConfig {
  ModelConfig model;
  LossWeights weights{1.0, 1.0};
  std::size_t batch = 2;
  std::uint64_t seed = 3;
  double step = 1e-6;       // finite-difference half-step
  double tolerance = 1e-4;  // max allowed relative error
};

struct GradCheckGroup {
  std::string name;  // parameter name
  double max_rel_err = 0.0;
  std::size_t checked = 0;  // entries compared
};

struct GradCheckReport {
  std::vector<GradCheckGroup> groups;
  double max_rel_err = 0.0;
  std::size_t total_checked = 0;
  bool passed = false;
  double seconds = 0.0;
};

// Relative error with an absolute floor, so near-zero gradients are judged
// on absolute deviation: |a - f| / max(|a|, |f|, 1e-3).
double gradcheck_rel_err(double analytic, double fd);

GradCheckReport run_gradient_check(const GradCheckConfig& config);

}  // namespace pedintent

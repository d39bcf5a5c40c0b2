#pragma once

#include "pedintent/tensor/params.hpp"

namespace pedintent {

struct AdamConfig {
  double lr = 5e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction. Moment buffers are keyed by parameter name
// and created on first use; a shape change between steps is an error.
class Adam {
 public:
  explicit Adam(AdamConfig config) : config_(config) {}

  // Applies one update to every parameter that has an entry in `grads`.
  // Parameters absent from the map are left untouched.
  void step(ParamStore& store, const GradMap& grads);

  std::int64_t steps_taken() const { return steps_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::map<std::string, std::vector<double>> m_;
  std::map<std::string, std::vector<double>> v_;
  std::int64_t steps_ = 0;
};

}  // namespace pedintent

#include "pedintent/tensor/adam.hpp"

#include <cmath>

namespace pedintent {

void Adam::step(ParamStore& store, const GradMap& grads) {
  ++steps_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(steps_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(steps_));
  for (auto& param : store.params()) {
    auto git = grads.find(param.name);
    if (git == grads.end()) continue;
    const auto& g = git->second;
    if (g.size() != param.value.size())
      throw DimensionError("Adam: gradient for '" + param.name + "' has " +
                           std::to_string(g.size()) + " values, parameter has " +
                           std::to_string(param.value.size()));
    auto& m = m_[param.name];
    auto& v = v_[param.name];
    if (m.empty()) m.assign(param.value.size(), 0.0);
    if (v.empty()) v.assign(param.value.size(), 0.0);
    if (m.size() != param.value.size())
      throw DimensionError("Adam: moment buffer for '" + param.name +
                           "' no longer matches the parameter shape");
    for (std::size_t i = 0; i < param.value.size(); ++i) {
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      param.value[i] -= config_.lr * mhat / (std::sqrt(vhat) + config_.eps);
      if (!std::isfinite(param.value[i]))
        throw NumericalError("Adam: parameter '" + param.name +
                             "' became non-finite at step " + std::to_string(steps_));
    }
  }
}

}  // namespace pedintent

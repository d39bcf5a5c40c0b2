#include "pedintent/tensor/params.hpp"

#include <cmath>

namespace pedintent {

Param& ParamStore::add(const std::string& name, Shape shape,
                       std::vector<double> value) {
  if (index_.count(name))
    throw ValidationError("ParamStore: duplicate parameter '" + name + "'");
  if (shape_numel(shape) != value.size())
    throw DimensionError("ParamStore: parameter '" + name + "' shape " +
                         shape_string(shape) + " expects " +
                         std::to_string(shape_numel(shape)) + " values, got " +
                         std::to_string(value.size()));
  index_[name] = params_.size();
  params_.push_back(Param{name, std::move(shape), std::move(value)});
  return params_.back();
}

Param& ParamStore::at(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end())
    throw ValidationError("ParamStore: unknown parameter '" + name + "'");
  return params_[it->second];
}

const Param& ParamStore::at(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw ValidationError("ParamStore: unknown parameter '" + name + "'");
  return params_[it->second];
}

bool ParamStore::contains(const std::string& name) const {
  return index_.count(name) != 0;
}

std::size_t ParamStore::total_values() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

std::vector<double> xavier_uniform(Rng& rng, std::size_t fan_in, std::size_t fan_out) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::vector<double> out(fan_in * fan_out);
  for (auto& v : out) v = rng.uniform(-bound, bound);
  return out;
}

std::vector<double> zeros(std::size_t n) { return std::vector<double>(n, 0.0); }

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

Tensor BoundParams::operator()(const std::string& name) {
  auto it = bound_.find(name);
  if (it != bound_.end()) return it->second;
  Param& p = store_->at(name);
  Tensor t = tape_->leaf(p.shape, p.value, trainable_);
  bound_.emplace(name, t);
  return t;
}

GradMap BoundParams::grads() const {
  GradMap out;
  for (const auto& [name, tensor] : bound_) {
    TapeNode* node = tensor.node();
    if (node->grad.size() == node->values.size())
      out.emplace(name, node->grad);
    else
      out.emplace(name, std::vector<double>(node->values.size(), 0.0));
  }
  return out;
}

}  // namespace pedintent

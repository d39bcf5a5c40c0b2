#pragma once

#include <map>
#include <string>
#include <vector>

#include "pedintent/rng.hpp"
#include "pedintent/tensor/tensor.hpp"

namespace pedintent {

// One named trainable array. Values live here between steps; tapes get a
// fresh leaf copy per forward pass.
struct Param {
  std::string name;
  Shape shape;
  std::vector<double> value;
};

// Ordered registry of trainable parameters. Iteration follows insertion
// order everywhere (updates, checkpoints, gradient checks), which keeps
// every downstream artifact reproducible.
class ParamStore {
 public:
  Param& add(const std::string& name, Shape shape, std::vector<double> value);
  Param& at(const std::string& name);
  const Param& at(const std::string& name) const;
  bool contains(const std::string& name) const;

  std::vector<Param>& params() { return params_; }
  const std::vector<Param>& params() const { return params_; }
  std::size_t size() const { return params_.size(); }
  std::size_t total_values() const;

 private:
  std::vector<Param> params_;
  std::map<std::string, std::size_t> index_;
};

// Initialisers. Xavier draws are uniform on +-sqrt(6/(fan_in+fan_out)).
std::vector<double> xavier_uniform(Rng& rng, std::size_t fan_in, std::size_t fan_out);
std::vector<double> zeros(std::size_t n);
std::vector<double> ones(std::size_t n);

// Binds store parameters onto one tape, one leaf per distinct name, so a
// model's forward code can ask for the same parameter repeatedly and share
// the node. When `trainable` is false the leaves skip gradient tracking
// (evaluation mode).
class BoundParams {
 public:
  BoundParams(Tape& tape, ParamStore& store, bool trainable)
      : tape_(&tape), store_(&store), trainable_(trainable) {}

  Tensor operator()(const std::string& name);

  // Gradients deposited by the last backward pass, keyed by name. Only
  // parameters that were actually bound appear.
  std::map<std::string, std::vector<double>> grads() const;

 private:
  Tape* tape_;
  ParamStore* store_;
  bool trainable_;
  std::map<std::string, Tensor> bound_;
};

using GradMap = std::map<std::string, std::vector<double>>;

}  // namespace pedintent

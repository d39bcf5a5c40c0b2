#pragma once

#include <string>
#include <vector>

#include "pedintent/tensor/ops.hpp"
#include "pedintent/tensor/params.hpp"

namespace pedintent {

// Graph convolution over the reason graph. `widths` is the full layer
// chain, e.g. {d, 128, D}: input reason-text embeddings of width d are
// propagated through widths.size()-1 rounds of X <- act(A_hat X W), with
// LeakyReLU between layers and a linear last layer.
struct GcnConfig {
  std::vector<std::size_t> widths;
  double leaky_slope = 0.2;

  std::size_t layers() const { return widths.size() - 1; }
  std::size_t in_dim() const { return widths.front(); }
  std::size_t out_dim() const { return widths.back(); }
};

// Registers `prefix`.w1 .. wL with Xavier init, in layer order.
void init_gcn_params(ParamStore& store, const std::string& prefix,
                     const GcnConfig& config, Rng& rng);

// x0: [n, d] node features; a_hat: [n, n] normalized adjacency.
Tensor gcn_forward(const Tensor& x0, const Tensor& a_hat, BoundParams& params,
                   const std::string& prefix, const GcnConfig& config);

}  // namespace pedintent

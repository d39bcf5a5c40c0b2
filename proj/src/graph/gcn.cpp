#include "pedintent/graph/gcn.hpp"

namespace pedintent {

namespace {

void check_config(const GcnConfig& config) {
  if (config.widths.size() < 2)
    throw ConfigError("gcn: widths must list at least input and output");
  for (std::size_t w : config.widths)
    if (w == 0) throw ConfigError("gcn: zero layer width");
}

std::string layer_name(const std::string& prefix, std::size_t l) {
  return prefix + ".w" + std::to_string(l + 1);
}

}  // namespace

void init_gcn_params(ParamStore& store, const std::string& prefix,
                     const GcnConfig& config, Rng& rng) {
  check_config(config);
  for (std::size_t l = 0; l < config.layers(); ++l) {
    const std::size_t fan_in = config.widths[l];
    const std::size_t fan_out = config.widths[l + 1];
    store.add(layer_name(prefix, l), {fan_in, fan_out},
              xavier_uniform(rng, fan_in, fan_out));
  }
}

Tensor gcn_forward(const Tensor& x0, const Tensor& a_hat, BoundParams& params,
                   const std::string& prefix, const GcnConfig& config) {
  check_config(config);
  const std::size_t n = x0.rows();
  if (x0.cols() != config.in_dim())
    throw DimensionError("gcn_forward: node features have width " +
                         std::to_string(x0.cols()) + ", config expects " +
                         std::to_string(config.in_dim()));
  if (a_hat.rows() != n || a_hat.cols() != n)
    throw DimensionError("gcn_forward: adjacency shape " +
                         shape_string(a_hat.shape()) + " does not match " +
                         std::to_string(n) + " nodes");
  Tensor x = x0;
  for (std::size_t l = 0; l < config.layers(); ++l) {
    x = matmul(matmul(a_hat, x), params(layer_name(prefix, l)));
    if (l + 1 < config.layers()) x = leaky_relu(x, config.leaky_slope);
  }
  return x;
}

}  // namespace pedintent

#include "pedintent/tfe/gru.hpp"

namespace pedintent {

void init_gru_params(ParamStore& store, const std::string& prefix,
                     const GruConfig& config, Rng& rng) {
  if (config.width == 0) throw ConfigError("gru: width must be positive");
  const std::size_t w = config.width;
  for (const char* gate : {"z", "r", "h"}) {
    store.add(prefix + ".w" + gate, {w, w}, xavier_uniform(rng, w, w));
    store.add(prefix + ".u" + gate, {w, w}, xavier_uniform(rng, w, w));
    store.add(prefix + ".b" + gate, {w}, zeros(w));
  }
}

Tensor gru_forward(const Tensor& seq, BoundParams& params, const std::string& prefix,
                   const GruConfig& config) {
  const std::size_t t = seq.rows();
  const std::size_t w = config.width;
  if (seq.cols() != w)
    throw DimensionError("gru_forward: sequence width " + std::to_string(seq.cols()) +
                         " does not match " + std::to_string(w));
  Tape& tape = *seq.tape();
  Tensor h = tape.constant({1, w}, zeros(w));
  std::vector<Tensor> states;
  states.reserve(t);
  for (std::size_t step = 0; step < t; ++step) {
    Tensor x = row(seq, step);
    Tensor z = sigmoid(add_row_bias(
        add(matmul(x, params(prefix + ".wz")), matmul(h, params(prefix + ".uz"))),
        params(prefix + ".bz")));
    Tensor r = sigmoid(add_row_bias(
        add(matmul(x, params(prefix + ".wr")), matmul(h, params(prefix + ".ur"))),
        params(prefix + ".br")));
    Tensor candidate = pedintent::tanh(add_row_bias(
        add(matmul(x, params(prefix + ".wh")),
            matmul(mul(r, h), params(prefix + ".uh"))),
        params(prefix + ".bh")));
    // h <- (1 - z) * h + z * candidate
    h = add(mul(affine(z, -1.0, 1.0), h), mul(z, candidate));
    states.push_back(h);
  }
  return t == 1 ? states[0] : concat(states, 0);
}

}  // namespace pedintent

#pragma once

#include <string>
#include <vector>

#include "pedintent/tensor/ops.hpp"
#include "pedintent/tensor/params.hpp"
#include "pedintent/tfe/features.hpp"

namespace pedintent {

// One per-stream transformer encoder. Pre-LN blocks:
//   x <- x + MSA(LN(x));  x <- x + MLP(LN(x))
// with a learned positional table added once before the first layer and a
// two-layer GELU MLP. Attention is bidirectional over the window; no causal
// mask is applied.
struct EncoderConfig {
  std::size_t width = 16;
  std::size_t layers = 2;
  std::size_t heads = 4;
  std::size_t mlp_hidden = 32;
  std::size_t max_t = 32;
  double layernorm_eps = 1e-5;

  std::size_t head_dim() const { return width / heads; }
};

void validate_encoder_config(const EncoderConfig& config);

// Registers `prefix`.pos, then per layer ln1/attention/ln2/mlp parameters,
// in a fixed documented order (stable across model variants).
void init_encoder_params(ParamStore& store, const std::string& prefix,
                         const EncoderConfig& config, Rng& rng);

// Per layer+head attention matrices (t x t, row-major) captured during the
// forward pass, for inspection and the row-sum property checks.
struct EncoderTrace {
  std::vector<std::vector<double>> attention;
};

// seq: [t, width], t <= max_t. Returns [t, width].
Tensor encode_stream(const Tensor& seq, BoundParams& params, const std::string& prefix,
                     const EncoderConfig& config, EncoderTrace* trace = nullptr);

// The three-stream encoder bank: local and global streams of width d_v and
// the 4-wide box stream, concatenated per timestep to t x (2*d_v + 4).
struct TfeConfig {
  EncoderConfig local;
  EncoderConfig global;
  EncoderConfig box;

  std::size_t fused_width() const { return local.width + global.width + box.width; }
};

TfeConfig make_tfe_config(std::size_t d_v, std::size_t layers, std::size_t heads,
                          std::size_t box_heads, std::size_t max_t);

void init_tfe_params(ParamStore& store, const TfeConfig& config, Rng& rng);

// Encodes a validated observation; returns [t, 2*d_v+4].
Tensor encode_observation(Tape& tape, const ObservationSequence& obs,
                          BoundParams& params, const TfeConfig& config,
                          EncoderTrace* trace = nullptr);

}  // namespace pedintent

#pragma once

#include <string>

#include "pedintent/tensor/ops.hpp"
#include "pedintent/tensor/params.hpp"

namespace pedintent {

// Single-layer gated recurrent encoder used by the recurrent-backbone
// ablation. Same contract as encode_stream: [t, width] in, [t, width] out
// (the full hidden-state sequence), so the attention tail is unchanged.
struct GruConfig {
  std::size_t width = 16;
};

void init_gru_params(ParamStore& store, const std::string& prefix,
                     const GruConfig& config, Rng& rng);

Tensor gru_forward(const Tensor& seq, BoundParams& params, const std::string& prefix,
                   const GruConfig& config);

}  // namespace pedintent

#pragma once

#include <string>
#include <vector>

#include "pedintent/tensor/ops.hpp"
#include "pedintent/tensor/params.hpp"

namespace pedintent {

// Attention-and-fusion tail. With w = 2*d_v + 4 (the fused stream width)
// and n reason classes:
//   score_s = h_e^T W_s h_s  over every hidden state h_s (h_e = last row)
//   alpha   = softmax(scores)
//   h_c     = sum_s alpha_s h_s
//   F       = tanh(W_c [h_c ; h_e])
//   C       = F X^T           (cross-modal similarities to reason rows)
// Reason logits default to C itself (identity head); the intent logit is an
// affine map of C. The no-crossmodal ablation puts affine heads directly
// on F and skips C.
struct FusionConfig {
  std::size_t width = 0;       // w, must equal the reason-embedding width D
  std::size_t n_reasons = 0;   // n
  bool affine_reason_head = false;
};

struct LossWeights {
  double reason = 1.0;  // gamma_R
  double intent = 1.0;  // gamma_I
};

void validate_loss_weights(const LossWeights& weights);

// Registers fusion.ws, fusion.wc, then the heads for the chosen variant.
void init_fusion_params(ParamStore& store, const FusionConfig& config, Rng& rng);
void init_no_crossmodal_heads(ParamStore& store, const FusionConfig& config, Rng& rng);

struct AttendResult {
  Tensor f;      // [1, w]
  Tensor alpha;  // [1, t]
};

AttendResult attend(const Tensor& h, BoundParams& params, const FusionConfig& config);

// f: [1, w]; x: [n, D] with D == w. Returns [1, n].
Tensor cross_modal(const Tensor& f, const Tensor& x);

struct HeadOutputs {
  Tensor intent_logit;   // [1, 1]
  Tensor reason_logits;  // [1, n]
};

HeadOutputs heads(const Tensor& c, BoundParams& params, const FusionConfig& config);
HeadOutputs forward_no_crossmodal(const Tensor& f, BoundParams& params,
                                  const FusionConfig& config);

// gamma_R * L_e + gamma_I * L_i: mean BCE over the n reason labels plus BCE
// on the intent logit.
Tensor multitask_loss(const HeadOutputs& outputs, int intent_target,
                      const std::vector<int>& reason_targets,
                      const LossWeights& weights);

}  // namespace pedintent

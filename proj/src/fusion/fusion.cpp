#include "pedintent/fusion/fusion.hpp"

namespace pedintent {

void validate_loss_weights(const LossWeights& weights) {
  if (weights.reason < 0.0 || weights.intent < 0.0)
    throw ConfigError("loss weights must be non-negative");
  if (weights.reason == 0.0 && weights.intent == 0.0)
    throw ConfigError("loss weights must not both be zero");
}

namespace {

void check_config(const FusionConfig& config) {
  if (config.width == 0 || config.n_reasons == 0)
    throw ConfigError("fusion: width and n_reasons must be positive");
}

}  // namespace

void init_fusion_params(ParamStore& store, const FusionConfig& config, Rng& rng) {
  check_config(config);
  const std::size_t w = config.width;
  const std::size_t n = config.n_reasons;
  store.add("fusion.ws", {w, w}, xavier_uniform(rng, w, w));
  store.add("fusion.wc", {2 * w, w}, xavier_uniform(rng, 2 * w, w));
  if (config.affine_reason_head) {
    store.add("head.reason.w", {n, n}, xavier_uniform(rng, n, n));
    store.add("head.reason.b", {n}, zeros(n));
  }
  store.add("head.intent.w", {n, 1}, xavier_uniform(rng, n, 1));
  store.add("head.intent.b", {1}, zeros(1));
}

void init_no_crossmodal_heads(ParamStore& store, const FusionConfig& config, Rng& rng) {
  check_config(config);
  const std::size_t w = config.width;
  const std::size_t n = config.n_reasons;
  store.add("fusion.ws", {w, w}, xavier_uniform(rng, w, w));
  store.add("fusion.wc", {2 * w, w}, xavier_uniform(rng, 2 * w, w));
  store.add("head.reason.w", {w, n}, xavier_uniform(rng, w, n));
  store.add("head.reason.b", {n}, zeros(n));
  store.add("head.intent.w", {w, 1}, xavier_uniform(rng, w, 1));
  store.add("head.intent.b", {1}, zeros(1));
}

AttendResult attend(const Tensor& h, BoundParams& params, const FusionConfig& config) {
  check_config(config);
  if (h.rank() != 2 || h.rows() == 0)
    throw ValidationError("attend: hidden states must be a non-empty t x w matrix");
  if (h.cols() != config.width)
    throw DimensionError("attend: hidden width " + std::to_string(h.cols()) +
                         " does not match configured width " +
                         std::to_string(config.width));
  const std::size_t t = h.rows();
  Tensor h_e = row(h, t - 1);
  Tensor scores = matmul(matmul(h_e, params("fusion.ws")), transpose(h));  // [1, t]
  Tensor alpha = softmax(scores);
  Tensor h_c = matmul(alpha, h);  // [1, w]
  Tensor f = pedintent::tanh(matmul(concat({h_c, h_e}, 1), params("fusion.wc")));
  return AttendResult{f, alpha};
}

Tensor cross_modal(const Tensor& f, const Tensor& x) {
  if (f.rank() != 2 || f.rows() != 1)
    throw DimensionError("cross_modal: F must be [1, w]");
  if (x.rank() != 2 || x.cols() != f.cols())
    throw ConfigError("cross_modal: reason embedding width " +
                      std::to_string(x.cols()) + " must equal fused width " +
                      std::to_string(f.cols()) +
                      " (configure the graph output width accordingly)");
  return matmul(f, transpose(x));  // [1, n]
}

HeadOutputs heads(const Tensor& c, BoundParams& params, const FusionConfig& config) {
  check_config(config);
  if (c.rank() != 2 || c.rows() != 1 || c.cols() != config.n_reasons)
    throw DimensionError("heads: expected C of shape [1, " +
                         std::to_string(config.n_reasons) + "], got " +
                         shape_string(c.shape()));
  HeadOutputs out;
  if (config.affine_reason_head) {
    out.reason_logits = add_row_bias(matmul(c, params("head.reason.w")),
                                     params("head.reason.b"));
  } else {
    out.reason_logits = c;
  }
  out.intent_logit = add_row_bias(matmul(c, params("head.intent.w")),
                                  params("head.intent.b"));
  return out;
}

HeadOutputs forward_no_crossmodal(const Tensor& f, BoundParams& params,
                                  const FusionConfig& config) {
  check_config(config);
  if (f.rank() != 2 || f.rows() != 1 || f.cols() != config.width)
    throw DimensionError("forward_no_crossmodal: expected F of shape [1, " +
                         std::to_string(config.width) + "], got " +
                         shape_string(f.shape()));
  HeadOutputs out;
  out.reason_logits = add_row_bias(matmul(f, params("head.reason.w")),
                                   params("head.reason.b"));
  out.intent_logit = add_row_bias(matmul(f, params("head.intent.w")),
                                  params("head.intent.b"));
  return out;
}

Tensor multitask_loss(const HeadOutputs& outputs, int intent_target,
                      const std::vector<int>& reason_targets,
                      const LossWeights& weights) {
  validate_loss_weights(weights);
  if (intent_target != 0 && intent_target != 1)
    throw ValidationError("multitask_loss: intent target must be 0 or 1");
  const std::size_t n = outputs.reason_logits.cols();
  if (reason_targets.size() != n)
    throw ValidationError("multitask_loss: expected " + std::to_string(n) +
                          " reason targets, got " +
                          std::to_string(reason_targets.size()));
  Tape& tape = *outputs.reason_logits.tape();
  std::vector<double> reason01(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (reason_targets[j] != 0 && reason_targets[j] != 1)
      throw ValidationError("multitask_loss: reason targets must be 0/1");
    reason01[j] = static_cast<double>(reason_targets[j]);
  }
  Tensor reason_loss = bce_with_logits(
      outputs.reason_logits, tape.constant({1, n}, std::move(reason01)), 1.0);
  Tensor intent_loss = bce_with_logits(
      outputs.intent_logit,
      tape.constant({1, 1}, {static_cast<double>(intent_target)}), 1.0);
  return add(scale(reason_loss, weights.reason), scale(intent_loss, weights.intent));
}

}  // namespace pedintent

#include "pedintent/tfe/encoder.hpp"

#include <cmath>

namespace pedintent {

void validate_encoder_config(const EncoderConfig& config) {
  if (config.width == 0 || config.heads == 0 || config.mlp_hidden == 0)
    throw ConfigError("encoder: width, heads and mlp_hidden must be positive");
  if (config.width % config.heads != 0)
    throw ConfigError("encoder: width " + std::to_string(config.width) +
                      " not divisible by " + std::to_string(config.heads) + " heads");
  if (config.max_t == 0) throw ConfigError("encoder: max_t must be positive");
}

namespace {

std::string lname(const std::string& prefix, std::size_t layer, const char* part) {
  return prefix + ".l" + std::to_string(layer + 1) + "." + part;
}

}  // namespace

void init_encoder_params(ParamStore& store, const std::string& prefix,
                         const EncoderConfig& config, Rng& rng) {
  validate_encoder_config(config);
  const std::size_t w = config.width;
  std::vector<double> pos(config.max_t * w);
  for (auto& v : pos) v = rng.normal(0.0, 0.02);
  store.add(prefix + ".pos", {config.max_t, w}, std::move(pos));
  for (std::size_t l = 0; l < config.layers; ++l) {
    store.add(lname(prefix, l, "ln1.gain"), {w}, ones(w));
    store.add(lname(prefix, l, "ln1.bias"), {w}, zeros(w));
    store.add(lname(prefix, l, "attn.wq"), {w, w}, xavier_uniform(rng, w, w));
    store.add(lname(prefix, l, "attn.bq"), {w}, zeros(w));
    store.add(lname(prefix, l, "attn.wk"), {w, w}, xavier_uniform(rng, w, w));
    store.add(lname(prefix, l, "attn.bk"), {w}, zeros(w));
    store.add(lname(prefix, l, "attn.wv"), {w, w}, xavier_uniform(rng, w, w));
    store.add(lname(prefix, l, "attn.bv"), {w}, zeros(w));
    store.add(lname(prefix, l, "attn.wo"), {w, w}, xavier_uniform(rng, w, w));
    store.add(lname(prefix, l, "attn.bo"), {w}, zeros(w));
    store.add(lname(prefix, l, "ln2.gain"), {w}, ones(w));
    store.add(lname(prefix, l, "ln2.bias"), {w}, zeros(w));
    store.add(lname(prefix, l, "mlp.w1"), {w, config.mlp_hidden},
              xavier_uniform(rng, w, config.mlp_hidden));
    store.add(lname(prefix, l, "mlp.b1"), {config.mlp_hidden}, zeros(config.mlp_hidden));
    store.add(lname(prefix, l, "mlp.w2"), {config.mlp_hidden, w},
              xavier_uniform(rng, config.mlp_hidden, w));
    store.add(lname(prefix, l, "mlp.b2"), {w}, zeros(w));
  }
}

Tensor encode_stream(const Tensor& seq, BoundParams& params, const std::string& prefix,
                     const EncoderConfig& config, EncoderTrace* trace) {
  validate_encoder_config(config);
  const std::size_t t = seq.rows();
  const std::size_t w = config.width;
  if (seq.cols() != w)
    throw DimensionError("encode_stream: sequence width " + std::to_string(seq.cols()) +
                         " does not match encoder width " + std::to_string(w));
  if (t > config.max_t)
    throw ConfigError("encode_stream: t=" + std::to_string(t) +
                      " exceeds positional capacity max_t=" +
                      std::to_string(config.max_t));

  Tensor x = add(seq, slice_rows(params(prefix + ".pos"), 0, t));
  const std::size_t dh = config.head_dim();
  const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));

  for (std::size_t l = 0; l < config.layers; ++l) {
    Tensor norm1 = layernorm(x, params(lname(prefix, l, "ln1.gain")),
                             params(lname(prefix, l, "ln1.bias")),
                             config.layernorm_eps);
    Tensor q = add_row_bias(matmul(norm1, params(lname(prefix, l, "attn.wq"))),
                            params(lname(prefix, l, "attn.bq")));
    Tensor k = add_row_bias(matmul(norm1, params(lname(prefix, l, "attn.wk"))),
                            params(lname(prefix, l, "attn.bk")));
    Tensor v = add_row_bias(matmul(norm1, params(lname(prefix, l, "attn.wv"))),
                            params(lname(prefix, l, "attn.bv")));
    std::vector<Tensor> head_outputs;
    head_outputs.reserve(config.heads);
    for (std::size_t h = 0; h < config.heads; ++h) {
      Tensor qh = slice_cols(q, h * dh, dh);
      Tensor kh = slice_cols(k, h * dh, dh);
      Tensor vh = slice_cols(v, h * dh, dh);
      Tensor att = softmax(scale(matmul(qh, transpose(kh)), inv_sqrt_dh));
      if (trace) trace->attention.push_back(att.values());
      head_outputs.push_back(matmul(att, vh));
    }
    Tensor ctx = config.heads == 1 ? head_outputs[0] : concat(head_outputs, 1);
    Tensor msa = add_row_bias(matmul(ctx, params(lname(prefix, l, "attn.wo"))),
                              params(lname(prefix, l, "attn.bo")));
    x = add(x, msa);

    Tensor norm2 = layernorm(x, params(lname(prefix, l, "ln2.gain")),
                             params(lname(prefix, l, "ln2.bias")),
                             config.layernorm_eps);
    Tensor hidden = gelu(add_row_bias(matmul(norm2, params(lname(prefix, l, "mlp.w1"))),
                                      params(lname(prefix, l, "mlp.b1"))));
    Tensor mlp = add_row_bias(matmul(hidden, params(lname(prefix, l, "mlp.w2"))),
                              params(lname(prefix, l, "mlp.b2")));
    x = add(x, mlp);
  }
  return x;
}

TfeConfig make_tfe_config(std::size_t d_v, std::size_t layers, std::size_t heads,
                          std::size_t box_heads, std::size_t max_t) {
  TfeConfig config;
  config.local = EncoderConfig{d_v, layers, heads, 2 * d_v, max_t, 1e-5};
  config.global = EncoderConfig{d_v, layers, heads, 2 * d_v, max_t, 1e-5};
  config.box = EncoderConfig{4, layers, box_heads, 8, max_t, 1e-5};
  validate_encoder_config(config.local);
  validate_encoder_config(config.global);
  validate_encoder_config(config.box);
  return config;
}

void init_tfe_params(ParamStore& store, const TfeConfig& config, Rng& rng) {
  init_encoder_params(store, "enc.local", config.local, rng);
  init_encoder_params(store, "enc.global", config.global, rng);
  init_encoder_params(store, "enc.box", config.box, rng);
}

Tensor encode_observation(Tape& tape, const ObservationSequence& obs,
                          BoundParams& params, const TfeConfig& config,
                          EncoderTrace* trace) {
  validate_observation(obs);
  if (obs.d_v != config.local.width)
    throw ConfigError("encode_observation: observation width " +
                      std::to_string(obs.d_v) + " does not match encoder width " +
                      std::to_string(config.local.width));
  Tensor local = tape.constant({obs.t, obs.d_v}, obs.local_feats);
  Tensor global = tape.constant({obs.t, obs.d_v}, obs.global_feats);
  Tensor boxes = tape.constant({obs.t, 4}, obs.boxes);
  Tensor enc_local = encode_stream(local, params, "enc.local", config.local, trace);
  Tensor enc_global = encode_stream(global, params, "enc.global", config.global, trace);
  Tensor enc_box = encode_stream(boxes, params, "enc.box", config.box, trace);
  return concat({enc_local, enc_global, enc_box}, 1);
}

}  // namespace pedintent

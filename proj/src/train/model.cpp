#include "pedintent/train/model.hpp"

#include <utility>

#include "pedintent/tensor/checkpoint.hpp"

namespace pedintent {

using nlohmann::json;

std::string to_string(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::Full: return "full";
    case ModelVariant::NoCrossmodal: return "no_crossmodal";
    case ModelVariant::WordEmbed: return "word_embed";
    case ModelVariant::RecurrentBackbone: return "recurrent_backbone";
  }
  throw ConfigError("unknown model variant value");
}

ModelVariant model_variant_from_string(const std::string& name) {
  if (name == "full") return ModelVariant::Full;
  if (name == "no_crossmodal") return ModelVariant::NoCrossmodal;
  if (name == "word_embed") return ModelVariant::WordEmbed;
  if (name == "recurrent_backbone") return ModelVariant::RecurrentBackbone;
  throw ConfigError("unknown model variant '" + name +
                    "' (expected full, no_crossmodal, word_embed or "
                    "recurrent_backbone)");
}

void validate_model_config(const ModelConfig& config) {
  if (config.t == 0) throw ConfigError("model: window length t must be positive");
  if (config.n == 0) throw ConfigError("model: need at least one reason class");
  if (config.embed_dim == 0)
    throw ConfigError("model: embedding width must be positive");
  if (config.gcn_hidden == 0)
    throw ConfigError("model: graph hidden width must be positive");
  const TfeConfig tfe = make_tfe_config(config.d_v, config.layers, config.heads,
                                        config.box_heads, config.t);
  validate_encoder_config(tfe.local);
  validate_encoder_config(tfe.global);
  validate_encoder_config(tfe.box);
}

Model::Model(const ModelConfig& config, EmbeddingTable embeddings,
             std::vector<double> a_hat, std::uint64_t seed)
    : config_(config), embeddings_(std::move(embeddings)), a_hat_(std::move(a_hat)) {
  build_configs();
  init_params(seed);
}

Model::Model(const ModelConfig& config, EmbeddingTable embeddings,
             std::vector<double> a_hat, ParamStore store)
    : config_(config),
      embeddings_(std::move(embeddings)),
      a_hat_(std::move(a_hat)),
      store_(std::move(store)) {
  build_configs();
}

void Model::build_configs() {
  validate_model_config(config_);
  if (embeddings_.vectors.size() != config_.n)
    throw ConfigError("model: embedding table has " +
                      std::to_string(embeddings_.vectors.size()) +
                      " vectors for " + std::to_string(config_.n) + " reasons");
  if (embeddings_.width != config_.embed_dim)
    throw ConfigError("model: embedding width " + std::to_string(embeddings_.width) +
                      " does not match configured width " +
                      std::to_string(config_.embed_dim));
  if (a_hat_.size() != config_.n * config_.n)
    throw ConfigError("model: adjacency has " + std::to_string(a_hat_.size()) +
                      " entries, expected " + std::to_string(config_.n * config_.n));
  tfe_ = make_tfe_config(config_.d_v, config_.layers, config_.heads,
                         config_.box_heads, config_.t);
  gru_ = GruConfig{config_.d_v};
  gcn_ = GcnConfig{{config_.embed_dim, config_.gcn_hidden, config_.fused_width()}, 0.2};
  fusion_ = FusionConfig{config_.fused_width(), config_.n, config_.affine_reason_head};
}

void Model::init_params(std::uint64_t seed) {
  Rng rng(seed);
  if (config_.variant == ModelVariant::RecurrentBackbone) {
    init_gru_params(store_, "gru.local", gru_, rng);
    init_gru_params(store_, "gru.global", gru_, rng);
    init_gru_params(store_, "gru.box", GruConfig{4}, rng);
  } else {
    init_tfe_params(store_, tfe_, rng);
  }
  if (config_.variant != ModelVariant::NoCrossmodal)
    init_gcn_params(store_, "gcn", gcn_, rng);
  if (config_.variant == ModelVariant::NoCrossmodal)
    init_no_crossmodal_heads(store_, fusion_, rng);
  else
    init_fusion_params(store_, fusion_, rng);
}

Tensor Model::encode_backbone(Tape& tape, BoundParams& bound,
                              const ObservationSequence& obs) const {
  if (config_.variant != ModelVariant::RecurrentBackbone)
    return encode_observation(tape, obs, bound, tfe_);
  validate_observation(obs);
  if (obs.d_v != config_.d_v)
    throw ConfigError("model: observation width " + std::to_string(obs.d_v) +
                      " does not match configured d_v " +
                      std::to_string(config_.d_v));
  Tensor local = tape.constant({obs.t, obs.d_v}, obs.local_feats);
  Tensor global = tape.constant({obs.t, obs.d_v}, obs.global_feats);
  Tensor boxes = tape.constant({obs.t, 4}, obs.boxes);
  Tensor h_local = gru_forward(local, bound, "gru.local", gru_);
  Tensor h_global = gru_forward(global, bound, "gru.global", gru_);
  Tensor h_box = gru_forward(boxes, bound, "gru.box", GruConfig{4});
  return concat({h_local, h_global, h_box}, 1);
}

Tensor Model::reason_matrix(Tape& tape, BoundParams& bound) const {
  Tensor x0 = embeddings_to_tensor(tape, embeddings_);
  Tensor a = tape.constant({config_.n, config_.n}, a_hat_);
  return gcn_forward(x0, a, bound, "gcn", gcn_);
}

HeadOutputs Model::forward_with_graph(Tape& tape, BoundParams& bound,
                                      const ObservationSequence& obs,
                                      const Tensor& x) {
  Tensor h = encode_backbone(tape, bound, obs);
  AttendResult att = attend(h, bound, fusion_);
  if (config_.variant == ModelVariant::NoCrossmodal)
    return forward_no_crossmodal(att.f, bound, fusion_);
  Tensor c = cross_modal(att.f, x);
  return heads(c, bound, fusion_);
}

HeadOutputs Model::forward(Tape& tape, BoundParams& bound,
                           const ObservationSequence& obs) {
  Tensor x;
  if (config_.variant != ModelVariant::NoCrossmodal) x = reason_matrix(tape, bound);
  return forward_with_graph(tape, bound, obs, x);
}

int Model::intent_target(const WindowSample& sample) {
  return sample.intent == Intent::Cross ? 1 : 0;
}

std::vector<int> Model::reason_target_row(const WindowSample& sample, std::size_t n) {
  std::vector<int> row(n, 0);
  for (int id : sample.reasons) {
    if (id < 0 || static_cast<std::size_t>(id) >= n)
      throw ValidationError("sample '" + sample.pedestrian_id + "': reason id " +
                            std::to_string(id) + " out of range for " +
                            std::to_string(n) + " classes");
    row[static_cast<std::size_t>(id)] = 1;
  }
  return row;
}

Tensor Model::batch_loss(Tape& tape, BoundParams& bound,
                         const std::vector<const WindowSample*>& batch,
                         const LossWeights& weights) {
  if (batch.empty()) throw ValidationError("batch_loss on an empty batch");
  Tensor x;
  if (config_.variant != ModelVariant::NoCrossmodal) x = reason_matrix(tape, bound);
  std::vector<Tensor> losses;
  losses.reserve(batch.size());
  for (const WindowSample* sample : batch) {
    HeadOutputs out = forward_with_graph(tape, bound, sample->obs, x);
    losses.push_back(multitask_loss(out, intent_target(*sample),
                                    reason_target_row(*sample, config_.n), weights));
  }
  return affine(add_n(losses), 1.0 / static_cast<double>(losses.size()), 0.0);
}

Model::Prediction Model::predict(const ObservationSequence& obs) {
  Tape tape;
  BoundParams bound(tape, store_, false);
  HeadOutputs out = forward(tape, bound, obs);
  Prediction p;
  p.intent_probability = sigmoid(out.intent_logit).values()[0];
  p.reason_probabilities = sigmoid(out.reason_logits).values();
  return p;
}

void Model::save(const std::filesystem::path& stem, const json& extra) const {
  json manifest = extra;
  if (manifest.contains("model"))
    throw ConfigError("checkpoint extra must not already carry a 'model' block");
  manifest["model"] = json{{"t", config_.t},
                           {"d_v", config_.d_v},
                           {"n", config_.n},
                           {"embed_dim", config_.embed_dim},
                           {"gcn_hidden", config_.gcn_hidden},
                           {"layers", config_.layers},
                           {"heads", config_.heads},
                           {"box_heads", config_.box_heads},
                           {"variant", to_string(config_.variant)},
                           {"affine_reason_head", config_.affine_reason_head}};
  manifest["embeddings"] = json{{"width", embeddings_.width},
                                {"provider_tag", embeddings_.provider_tag},
                                {"vectors", embeddings_.vectors}};
  manifest["a_hat"] = a_hat_;
  save_checkpoint(store_, stem, manifest);
}

LoadedModel Model::load(const std::filesystem::path& stem) {
  LoadedCheckpoint ckpt = load_checkpoint(stem);
  if (!ckpt.extra.contains("model"))
    throw IoError("checkpoint '" + stem.string() + "' has no model block");
  const json& m = ckpt.extra.at("model");
  ModelConfig config;
  config.t = m.at("t").get<std::size_t>();
  config.d_v = m.at("d_v").get<std::size_t>();
  config.n = m.at("n").get<std::size_t>();
  config.embed_dim = m.at("embed_dim").get<std::size_t>();
  config.gcn_hidden = m.at("gcn_hidden").get<std::size_t>();
  config.layers = m.at("layers").get<std::size_t>();
  config.heads = m.at("heads").get<std::size_t>();
  config.box_heads = m.at("box_heads").get<std::size_t>();
  config.variant = model_variant_from_string(m.at("variant").get<std::string>());
  config.affine_reason_head = m.at("affine_reason_head").get<bool>();

  const json& e = ckpt.extra.at("embeddings");
  EmbeddingTable table;
  table.width = e.at("width").get<std::size_t>();
  table.provider_tag = e.at("provider_tag").get<std::string>();
  table.vectors = e.at("vectors").get<std::vector<std::vector<double>>>();

  std::vector<double> a_hat = ckpt.extra.at("a_hat").get<std::vector<double>>();

  json extra = std::move(ckpt.extra);
  extra.erase("model");
  extra.erase("embeddings");
  extra.erase("a_hat");
  return LoadedModel{Model(config, std::move(table), std::move(a_hat),
                           std::move(ckpt.store)),
                     std::move(extra)};
}

}  // namespace pedintent

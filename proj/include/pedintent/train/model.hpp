#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pedintent/data/window.hpp"
#include "pedintent/embed/embedding.hpp"
#include "pedintent/fusion/fusion.hpp"
#include "pedintent/graph/gcn.hpp"
#include "pedintent/tfe/encoder.hpp"
#include "pedintent/tfe/gru.hpp"

namespace pedintent {

// Model variants exercised by the ablation study. `Full` is the reference
// network; the others change exactly one piece:
//   NoCrossmodal      affine heads directly on the fused vector F
//   WordEmbed         word-average reason embeddings instead of toy-hash
//   RecurrentBackbone single-layer GRUs of matching width replace the
//                     per-stream transformers
enum class ModelVariant { Full, NoCrossmodal, WordEmbed, RecurrentBackbone };

std::string to_string(ModelVariant variant);
ModelVariant model_variant_from_string(const std::string& name);

struct LoadedModel;

struct ModelConfig {
  std::size_t t = 15;          // window length
  std::size_t d_v = 16;        // per-stream visual feature width
  std::size_t n = 17;          // reason classes
  std::size_t embed_dim = 32;  // reason-text embedding width
  std::size_t gcn_hidden = 64; // graph-convolution hidden width
  std::size_t layers = 2;      // transformer layers per stream
  std::size_t heads = 4;       // attention heads, local/global streams
  std::size_t box_heads = 2;   // attention heads, 4-wide box stream
  ModelVariant variant = ModelVariant::Full;
  bool affine_reason_head = false;

  // Width of the fused per-timestep vector and of the graph output rows.
  std::size_t fused_width() const { return 2 * d_v + 4; }
};

void validate_model_config(const ModelConfig& config);

// The assembled network. Reason embeddings and the normalized adjacency are
// fixed inputs captured at construction; everything trainable lives in the
// parameter store. Construction seeds every parameter deterministically,
// drawing the shared backbone first so variants that differ only in the
// head start from identical encoder weights.
class Model {
 public:
  Model(const ModelConfig& config, EmbeddingTable embeddings,
        std::vector<double> a_hat, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  ParamStore& params() { return store_; }
  const ParamStore& params() const { return store_; }
  const EmbeddingTable& embeddings() const { return embeddings_; }
  const std::vector<double>& a_hat() const { return a_hat_; }

  // Forward one observation on the caller's tape. `bound` must wrap this
  // model's parameter store.
  HeadOutputs forward(Tape& tape, BoundParams& bound, const ObservationSequence& obs);

  // Mean multitask loss over the batch; per-sample terms are accumulated
  // in batch order and the graph output is shared across samples.
  Tensor batch_loss(Tape& tape, BoundParams& bound,
                    const std::vector<const WindowSample*>& batch,
                    const LossWeights& weights);

  struct Prediction {
    double intent_probability = 0.0;
    std::vector<double> reason_probabilities;  // length n
  };

  // Evaluation-mode forward pass on a private tape, no gradient tracking.
  Prediction predict(const ObservationSequence& obs);

  // Checkpoint the parameters together with everything needed to rebuild
  // the model: config, embedding table, adjacency. `extra` entries are
  // merged into the manifest next to the model block.
  void save(const std::filesystem::path& stem,
            const nlohmann::json& extra = nlohmann::json::object()) const;

  static LoadedModel load(const std::filesystem::path& stem);

  // Targets in head order, shared with the metric code: intent 0/1 and a
  // 0/1 row of length n from the ascending reason-id list.
  static int intent_target(const WindowSample& sample);
  static std::vector<int> reason_target_row(const WindowSample& sample, std::size_t n);

 private:
  Model(const ModelConfig& config, EmbeddingTable embeddings,
        std::vector<double> a_hat, ParamStore store);

  void build_configs();
  void init_params(std::uint64_t seed);
  Tensor encode_backbone(Tape& tape, BoundParams& bound,
                         const ObservationSequence& obs) const;
  Tensor reason_matrix(Tape& tape, BoundParams& bound) const;
  HeadOutputs forward_with_graph(Tape& tape, BoundParams& bound,
                                 const ObservationSequence& obs, const Tensor& x);

  ModelConfig config_;
  EmbeddingTable embeddings_;
  std::vector<double> a_hat_;  // n*n, row-major
  ParamStore store_;
  TfeConfig tfe_;
  GruConfig gru_;
  GcnConfig gcn_;
  FusionConfig fusion_;
};

struct LoadedModel {
  Model model;
  nlohmann::json extra;
};

}  // namespace pedintent

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pedintent/data/window.hpp"
#include "pedintent/train/metrics.hpp"
#include "pedintent/train/model.hpp"

namespace pedintent {

struct TrainConfig {
  ModelConfig model;
  WindowConfig window;  // window.t must equal model.t
  SplitRatios split;
  LossWeights weights;
  double lr = 5e-5;
  std::size_t batch_size = 8;
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
  double adjacency_threshold = 0.0;

  // Optional file outputs; both stay in memory when the paths are empty.
  std::filesystem::path log_path;         // one JSON object per epoch, LF
  std::filesystem::path checkpoint_stem;  // best-validation parameters
};

void validate_train_config(const TrainConfig& config);

// The corpus plus its per-stream feature sources. Records are split by
// pedestrian before windowing, so no pedestrian contributes to two splits.
struct TrainData {
  const std::vector<AnnotationRecord>* records = nullptr;
  const FeatureProvider* local = nullptr;
  const FeatureProvider* global = nullptr;
};

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  MetricsReport val_metrics;
  bool is_best = false;
};

struct TrainResult {
  explicit TrainResult(Model m) : model(std::move(m)) {}

  Model model;  // parameters restored to the best-validation epoch
  std::vector<EpochLog> log;
  std::size_t best_epoch = 0;   // 0 means the initial parameters
  double best_val_loss = 0.0;   // validation loss at the best epoch
  MetricsReport val_metrics;   // at the best epoch; samples == 0 if skipped
  MetricsReport test_metrics;  // at the best epoch; samples == 0 if the
                               // test split produced no windows
  std::size_t train_windows = 0;
  std::size_t val_windows = 0;
  std::size_t test_windows = 0;
  std::size_t skipped_records = 0;  // too short to window, across splits
};

// Metrics over a window set (side-effect free; both the parameters and the
// sample list are left untouched). Empty input is an error.
MetricsReport evaluate_model(Model& model, const std::vector<WindowSample>& samples);

// Mean multitask loss over a window set in evaluation mode.
double evaluate_loss(Model& model, const std::vector<WindowSample>& samples,
                     const LossWeights& weights, std::size_t batch_size);

// Deterministic end-to-end training: split, window, build the reason graph
// from the training records, then run seeded Adam epochs with fixed-order
// batches. Identical inputs give bit-identical results. A non-finite value
// anywhere aborts with a diagnostic dump next to the epoch log. epochs == 0
// checkpoints the initial parameters.
TrainResult train_model(const TrainConfig& config, const TrainData& data,
                        const EmbeddingTable& embeddings);

// The embedding table a variant trains with by default: word-average for
// the word-embedding ablation, toy-hash otherwise.
EmbeddingTable default_embeddings(const ReasonVocabulary& vocab,
                                  const ModelConfig& config, std::uint64_t seed);

}  // namespace pedintent

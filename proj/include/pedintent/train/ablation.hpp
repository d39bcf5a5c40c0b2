#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pedintent/train/trainer.hpp"

namespace pedintent {

// One trained run inside an ablation row.
struct AblationRun {
  std::uint64_t seed = 0;
  std::size_t best_epoch = 0;
  MetricsReport test;
};

struct AggregateStat {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single run
};

AggregateStat aggregate(const std::vector<double>& values);

// One ablation row: a model variant or a loss-weight setting, trained once
// per seed and summarized as mean and spread over the seeds.
struct AblationRow {
  std::string name;
  std::vector<AblationRun> runs;
  AggregateStat intent_accuracy;
  AggregateStat intent_f1;
  AggregateStat intent_auc;
  AggregateStat reason_subset;
  AggregateStat reason_hamming;
  AggregateStat reason_macro_f1;
};

struct AblationConfig {
  TrainConfig base;  // variant, weights and seed are overridden per run
  std::vector<ModelVariant> variants{
      ModelVariant::Full, ModelVariant::NoCrossmodal, ModelVariant::WordEmbed,
      ModelVariant::RecurrentBackbone};
  std::vector<LossWeights> weight_grid{{0.5, 1.0}, {1.0, 0.5}, {1.0, 1.0}};
  std::vector<std::uint64_t> seeds{1, 2, 3};  // at least three
};

struct AblationReport {
  std::vector<std::uint64_t> seeds;
  std::vector<AblationRow> variant_rows;
  std::vector<AblationRow> weight_rows;  // base variant under each weight pair
  std::string best_weights_by_intent_accuracy;
  std::vector<std::string> notes;
};

// Trains every (row, seed) combination with the shared data and reports
// mean +- std per metric. Variance comes from the seeds alone: the split,
// the windows and the graph are identical across rows.
AblationReport run_ablation(const AblationConfig& config, const TrainData& data,
                            const ReasonVocabulary& vocab);

nlohmann::json ablation_report_json(const AblationReport& report);

}  // namespace pedintent

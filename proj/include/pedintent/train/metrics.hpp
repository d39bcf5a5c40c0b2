#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pedintent/common.hpp"

namespace pedintent {

// Binary confusion counts plus the derived rates. The degenerate F1 case
// (2TP + FP + FN == 0, a class absent and never predicted) counts as 1.0;
// precision with no positive predictions counts as 0.0. Both conventions
// are part of the metric contract and mirrored by the test oracles.
struct BinaryCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const { return tp + fp + fn + tn; }
  double accuracy() const;
  double precision() const;
  double f1() const;
};

struct IntentMetrics {
  double accuracy = 0.0;
  double f1 = 0.0;
  double precision = 0.0;
  double auc = 0.0;
  BinaryCounts counts;
};

struct ReasonClassMetrics {
  int reason_id = 0;
  BinaryCounts counts;
  double f1 = 0.0;
};

struct ReasonMetrics {
  double subset_accuracy = 0.0;   // exact-match fraction, the primary rate
  double hamming_accuracy = 0.0;  // per-cell agreement fraction
  double macro_f1 = 0.0;          // unweighted mean of per-class F1
  std::vector<ReasonClassMetrics> per_class;
};

struct MetricsReport {
  IntentMetrics intent;
  ReasonMetrics reason;
  std::size_t samples = 0;
  double wall_clock_per_sample = 0.0;  // seconds, excluded from equality
};

// Probabilities are thresholded at 0.5 (p > 0.5 predicts the positive
// class). AUC uses the rank statistic with average ranks on ties; a split
// with only one class present scores the uninformative 0.5.
double auc_score(const std::vector<double>& scores, const std::vector<int>& labels);

IntentMetrics intent_metrics(const std::vector<double>& probabilities,
                             const std::vector<int>& labels);

// predictions/targets: one 0/1 row of length n per sample.
ReasonMetrics reason_metrics(const std::vector<std::vector<int>>& predictions,
                             const std::vector<std::vector<int>>& targets);

// Rendered with stable key order for logs and report files.
nlohmann::json metrics_json(const MetricsReport& report);
std::string metrics_to_json(const MetricsReport& report);

}  // namespace pedintent

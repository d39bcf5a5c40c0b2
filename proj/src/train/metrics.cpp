#include "pedintent/train/metrics.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

namespace pedintent {

using nlohmann::json;

double BinaryCounts::accuracy() const {
  const std::int64_t n = total();
  if (n == 0) throw ValidationError("accuracy of an empty sample set");
  return static_cast<double>(tp + tn) / static_cast<double>(n);
}

double BinaryCounts::precision() const {
  const std::int64_t denom = tp + fp;
  if (denom == 0) return 0.0;
  return static_cast<double>(tp) / static_cast<double>(denom);
}

double BinaryCounts::f1() const {
  const std::int64_t denom = 2 * tp + fp + fn;
  if (denom == 0) return 1.0;
  return static_cast<double>(2 * tp) / static_cast<double>(denom);
}

double auc_score(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size())
    throw DimensionError("auc: " + std::to_string(scores.size()) + " scores vs " +
                         std::to_string(labels.size()) + " labels");
  if (scores.empty()) throw ValidationError("auc of an empty sample set");
  std::size_t positives = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1)
      throw ValidationError("auc: label " + std::to_string(labels[i]) +
                            " at index " + std::to_string(i) + " is not 0/1");
    positives += static_cast<std::size_t>(labels[i]);
  }
  const std::size_t negatives = scores.size() - positives;
  if (positives == 0 || negatives == 0) return 0.5;

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Average-rank statistic: ties within a score group all receive the mean
  // of the ranks the group spans, so tied positive/negative pairs count 1/2.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] == 1) positive_rank_sum += mean_rank;
    i = j;
  }
  const double p = static_cast<double>(positives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) /
         (p * static_cast<double>(negatives));
}

IntentMetrics intent_metrics(const std::vector<double>& probabilities,
                             const std::vector<int>& labels) {
  if (probabilities.size() != labels.size())
    throw DimensionError("intent_metrics: " + std::to_string(probabilities.size()) +
                         " probabilities vs " + std::to_string(labels.size()) +
                         " labels");
  if (probabilities.empty())
    throw ValidationError("intent_metrics on an empty sample set");
  IntentMetrics m;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1)
      throw ValidationError("intent_metrics: label " + std::to_string(labels[i]) +
                            " at index " + std::to_string(i) + " is not 0/1");
    const int pred = probabilities[i] > 0.5 ? 1 : 0;
    if (pred == 1 && labels[i] == 1) ++m.counts.tp;
    if (pred == 1 && labels[i] == 0) ++m.counts.fp;
    if (pred == 0 && labels[i] == 1) ++m.counts.fn;
    if (pred == 0 && labels[i] == 0) ++m.counts.tn;
  }
  m.accuracy = m.counts.accuracy();
  m.precision = m.counts.precision();
  m.f1 = m.counts.f1();
  m.auc = auc_score(probabilities, labels);
  return m;
}

ReasonMetrics reason_metrics(const std::vector<std::vector<int>>& predictions,
                             const std::vector<std::vector<int>>& targets) {
  if (predictions.size() != targets.size())
    throw DimensionError("reason_metrics: " + std::to_string(predictions.size()) +
                         " prediction rows vs " + std::to_string(targets.size()) +
                         " target rows");
  if (predictions.empty())
    throw ValidationError("reason_metrics on an empty sample set");
  const std::size_t n = targets[0].size();
  if (n == 0) throw ValidationError("reason_metrics with zero classes");

  ReasonMetrics m;
  m.per_class.resize(n);
  for (std::size_t c = 0; c < n; ++c) m.per_class[c].reason_id = static_cast<int>(c);

  std::int64_t exact = 0;
  std::int64_t agree_cells = 0;
  for (std::size_t s = 0; s < predictions.size(); ++s) {
    if (predictions[s].size() != n || targets[s].size() != n)
      throw DimensionError("reason_metrics: row " + std::to_string(s) +
                           " length mismatch");
    bool all_match = true;
    for (std::size_t c = 0; c < n; ++c) {
      const int p = predictions[s][c];
      const int t = targets[s][c];
      if ((p != 0 && p != 1) || (t != 0 && t != 1))
        throw ValidationError("reason_metrics: non-binary cell at row " +
                              std::to_string(s) + " class " + std::to_string(c));
      BinaryCounts& bc = m.per_class[c].counts;
      if (p == 1 && t == 1) ++bc.tp;
      if (p == 1 && t == 0) ++bc.fp;
      if (p == 0 && t == 1) ++bc.fn;
      if (p == 0 && t == 0) ++bc.tn;
      if (p == t)
        ++agree_cells;
      else
        all_match = false;
    }
    if (all_match) ++exact;
  }

  const double samples = static_cast<double>(predictions.size());
  m.subset_accuracy = static_cast<double>(exact) / samples;
  m.hamming_accuracy =
      static_cast<double>(agree_cells) / (samples * static_cast<double>(n));
  double f1_sum = 0.0;
  for (auto& cls : m.per_class) {
    cls.f1 = cls.counts.f1();
    f1_sum += cls.f1;
  }
  m.macro_f1 = f1_sum / static_cast<double>(n);
  return m;
}

json metrics_json(const MetricsReport& report) {
  json per_class = json::array();
  for (const auto& cls : report.reason.per_class)
    per_class.push_back(json{{"reason_id", cls.reason_id},
                             {"tp", cls.counts.tp},
                             {"fp", cls.counts.fp},
                             {"fn", cls.counts.fn},
                             {"tn", cls.counts.tn},
                             {"f1", cls.f1}});
  const json j{
      {"samples", report.samples},
      {"wall_clock_per_sample", report.wall_clock_per_sample},
      {"intent",
       json{{"accuracy", report.intent.accuracy},
            {"precision", report.intent.precision},
            {"f1", report.intent.f1},
            {"auc", report.intent.auc}}},
      {"reason",
       json{{"subset_accuracy", report.reason.subset_accuracy},
            {"hamming_accuracy", report.reason.hamming_accuracy},
            {"macro_f1", report.reason.macro_f1},
            {"per_class", std::move(per_class)}}}};
  return j;
}

std::string metrics_to_json(const MetricsReport& report) {
  return metrics_json(report).dump();
}

}  // namespace pedintent

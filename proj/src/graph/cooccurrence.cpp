#include "pedintent/graph/cooccurrence.hpp"

namespace pedintent {

CooccurrenceStats count_cooccurrence(const std::vector<std::vector<int>>& label_sets,
                                     std::size_t n) {
  CooccurrenceStats stats;
  stats.n = n;
  stats.count.assign(n, 0);
  stats.pair_count.assign(n * n, 0);
  stats.total_records = static_cast<std::int64_t>(label_sets.size());
  for (const auto& labels : label_sets) {
    for (int a : labels) {
      if (a < 0 || static_cast<std::size_t>(a) >= n)
        throw ValidationError("count_cooccurrence: label " + std::to_string(a) +
                              " out of range for n=" + std::to_string(n));
      const auto ia = static_cast<std::size_t>(a);
      ++stats.count[ia];
      for (int b : labels)
        ++stats.pair_count[ia * n + static_cast<std::size_t>(b)];
    }
  }
  return stats;
}

CooccurrenceStats count_cooccurrence(const std::vector<AnnotationRecord>& corpus,
                                     const ReasonVocabulary& vocab) {
  std::vector<std::vector<int>> sets;
  sets.reserve(corpus.size());
  for (const auto& r : corpus) {
    for (int id : r.reasons)
      if (id < 0 || static_cast<std::size_t>(id) >= vocab.size())
        throw ValidationError("count_cooccurrence: record '" + r.pedestrian_id +
                              "' carries unknown reason id " + std::to_string(id));
    sets.push_back(r.reasons);
  }
  return count_cooccurrence(sets, vocab.size());
}

AdjacencyMatrix build_adjacency(const CooccurrenceStats& stats, double threshold) {
  AdjacencyMatrix a;
  a.n = stats.n;
  a.p.assign(stats.n * stats.n, 0.0);
  for (std::size_t i = 0; i < stats.n; ++i) {
    if (stats.count[i] == 0) continue;  // unseen reason: isolated node
    const auto denom = static_cast<double>(stats.count[i]);
    for (std::size_t j = 0; j < stats.n; ++j) {
      double p = static_cast<double>(stats.pair(i, j)) / denom;
      if (threshold > 0.0 && i != j && p < threshold) p = 0.0;
      a.p[i * stats.n + j] = p;
    }
  }
  for (std::size_t i = 0; i < stats.n; ++i)
    for (std::size_t j = 0; j < stats.n; ++j) {
      const double p = a.at(i, j);
      if (p < 0.0 || p > 1.0)
        throw NumericalError("build_adjacency: entry out of [0,1]");
    }
  return a;
}

std::vector<double> normalize_adjacency(const AdjacencyMatrix& a) {
  std::vector<double> out(a.p.size(), 0.0);
  for (std::size_t i = 0; i < a.n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < a.n; ++j) sum += a.at(i, j);
    if (sum == 0.0) continue;
    for (std::size_t j = 0; j < a.n; ++j) out[i * a.n + j] = a.at(i, j) / sum;
  }
  return out;
}

}  // namespace pedintent

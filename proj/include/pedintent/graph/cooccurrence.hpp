#pragma once

#include <cstdint>
#include <vector>

#include "pedintent/data/annotation.hpp"
#include "pedintent/graph/vocabulary.hpp"
#include "pedintent/tensor/tensor.hpp"

namespace pedintent {

// Record-level reason co-occurrence counts. count_ij is symmetric with
// count_ii equal to the per-reason occurrence count.
struct CooccurrenceStats {
  std::size_t n = 0;
  std::vector<std::int64_t> count;       // length n
  std::vector<std::int64_t> pair_count;  // n*n, row-major
  std::int64_t total_records = 0;

  std::int64_t pair(std::size_t i, std::size_t j) const {
    return pair_count[i * n + j];
  }
};

// Core counter over bare label sets (each set ascending, ids < n).
CooccurrenceStats count_cooccurrence(const std::vector<std::vector<int>>& label_sets,
                                     std::size_t n);

// Convenience overload that validates reason ids against the vocabulary and
// names the offending record on failure.
CooccurrenceStats count_cooccurrence(const std::vector<AnnotationRecord>& corpus,
                                     const ReasonVocabulary& vocab);

// Directed conditional-probability graph over reasons:
// A[i][j] = P(reason j present | reason i present) = count_ij / count_i,
// defined as 0 for never-observed i (the node stays isolated).
struct AdjacencyMatrix {
  std::size_t n = 0;
  std::vector<double> p;  // n*n, row-major

  double at(std::size_t i, std::size_t j) const { return p[i * n + j]; }
};

// `threshold`, when positive, zeroes off-diagonal entries below it before
// the invariant check; the default keeps the raw probabilities.
AdjacencyMatrix build_adjacency(const CooccurrenceStats& stats, double threshold = 0.0);

// Random-walk row normalization: each nonzero row is divided by its sum, so
// row sums are exactly 0 or 1. Returned flat, row-major, for use as a
// constant tensor in the graph convolution.
std::vector<double> normalize_adjacency(const AdjacencyMatrix& a);

}  // namespace pedintent

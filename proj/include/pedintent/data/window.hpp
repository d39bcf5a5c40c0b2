#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pedintent/data/annotation.hpp"
#include "pedintent/tfe/features.hpp"

namespace pedintent {

// One training sample: a fixed-length observation window plus the record's
// targets. Windows inherit intent and reasons from the whole record.
struct WindowSample {
  ObservationSequence obs;
  Intent intent = Intent::NoCross;
  std::vector<int> reasons;  // ascending, unique
  std::string pedestrian_id;
  long long start_frame = 0;
};

struct WindowConfig {
  std::size_t t = 15;
  double overlap = 0.6;  // fraction of t shared by consecutive windows
};

// Stride between window starts: ceil(t * (1 - overlap)), never below 1.
// The product is computed with a small backoff so that values like
// 10 * 0.4, which lands just above 4 in binary, still give stride 4.
std::size_t window_stride(std::size_t t, double overlap);

// Sliding windows over one record's frame track. Both providers must
// report the same width. Records shorter than t produce no windows.
std::vector<WindowSample> window_record(const AnnotationRecord& record,
                                        const WindowConfig& config,
                                        const FeatureProvider& local,
                                        const FeatureProvider& global);

struct WindowedCorpus {
  std::vector<WindowSample> samples;
  std::size_t skipped_records = 0;  // records with fewer than t frames
};

WindowedCorpus window_corpus(const std::vector<AnnotationRecord>& records,
                             const WindowConfig& config,
                             const FeatureProvider& local,
                             const FeatureProvider& global);

struct SplitRatios {
  double train = 0.7;
  double val = 0.1;
  double test = 0.2;
};

struct CorpusSplit {
  std::vector<AnnotationRecord> train;
  std::vector<AnnotationRecord> val;
  std::vector<AnnotationRecord> test;
};

// Seeded split at pedestrian granularity: every record of a pedestrian
// lands in the same part. Pedestrian ids are collected in first-appearance
// order, shuffled with the seed, and cut at floor(ratio * count) for each
// part; leftover pedestrians from the floors go to train. Records keep
// their corpus order within each part.
CorpusSplit split_corpus(const std::vector<AnnotationRecord>& records,
                         const SplitRatios& ratios, std::uint64_t seed);

}  // namespace pedintent

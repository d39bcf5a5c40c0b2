#include "pedintent/data/window.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pedintent/rng.hpp"

namespace pedintent {

std::size_t window_stride(std::size_t t, double overlap) {
  if (t == 0) throw ConfigError("window_stride: t must be positive");
  if (overlap < 0.0 || overlap >= 1.0)
    throw ConfigError("window_stride: overlap must be in [0, 1)");
  const double raw = static_cast<double>(t) * (1.0 - overlap);
  const auto stride = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::max<std::size_t>(stride, 1);
}

std::vector<WindowSample> window_record(const AnnotationRecord& record,
                                        const WindowConfig& config,
                                        const FeatureProvider& local,
                                        const FeatureProvider& global) {
  if (local.width() != global.width())
    throw DimensionError("window_record: local width " +
                         std::to_string(local.width()) + " != global width " +
                         std::to_string(global.width()));
  const std::size_t t = config.t;
  const std::size_t stride = window_stride(t, config.overlap);
  std::vector<WindowSample> out;
  if (record.frames.size() < t) return out;

  const std::size_t d_v = local.width();
  for (std::size_t start = 0; start + t <= record.frames.size();
       start += stride) {
    WindowSample sample;
    sample.intent = record.intent;
    sample.reasons = record.reasons;
    sample.pedestrian_id = record.pedestrian_id;
    sample.start_frame = record.frames[start].frame;
    sample.obs.t = t;
    sample.obs.d_v = d_v;
    sample.obs.local_feats.reserve(t * d_v);
    sample.obs.global_feats.reserve(t * d_v);
    sample.obs.boxes.reserve(t * 4);
    for (std::size_t i = start; i < start + t; ++i) {
      const auto& fb = record.frames[i];
      const auto lf = local.features(record.pedestrian_id, fb.frame);
      const auto gf = global.features(record.pedestrian_id, fb.frame);
      sample.obs.local_feats.insert(sample.obs.local_feats.end(), lf.begin(),
                                    lf.end());
      sample.obs.global_feats.insert(sample.obs.global_feats.end(), gf.begin(),
                                     gf.end());
      for (double v : fb.bbox) sample.obs.boxes.push_back(v);
    }
    validate_observation(sample.obs);
    out.push_back(std::move(sample));
  }
  return out;
}

WindowedCorpus window_corpus(const std::vector<AnnotationRecord>& records,
                             const WindowConfig& config,
                             const FeatureProvider& local,
                             const FeatureProvider& global) {
  WindowedCorpus out;
  for (const auto& record : records) {
    if (record.frames.size() < config.t) {
      ++out.skipped_records;
      continue;
    }
    auto windows = window_record(record, config, local, global);
    std::move(windows.begin(), windows.end(), std::back_inserter(out.samples));
  }
  return out;
}

CorpusSplit split_corpus(const std::vector<AnnotationRecord>& records,
                         const SplitRatios& ratios, std::uint64_t seed) {
  if (ratios.train < 0.0 || ratios.val < 0.0 || ratios.test < 0.0)
    throw ConfigError("split_corpus: ratios must be non-negative");
  if (std::fabs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9)
    throw ConfigError("split_corpus: ratios must sum to 1");

  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const auto& record : records)
    if (seen.insert(record.pedestrian_id).second)
      ids.push_back(record.pedestrian_id);

  Rng rng(seed);
  rng.shuffle(ids);

  const std::size_t p = ids.size();
  const auto n_train = static_cast<std::size_t>(ratios.train * static_cast<double>(p));
  const auto n_val = static_cast<std::size_t>(ratios.val * static_cast<double>(p));
  const auto n_test = static_cast<std::size_t>(ratios.test * static_cast<double>(p));
  const std::size_t leftover = p - n_train - n_val - n_test;

  std::set<std::string> val_ids, test_ids;
  std::size_t cursor = n_train + leftover;
  for (std::size_t i = 0; i < n_val; ++i) val_ids.insert(ids[cursor++]);
  for (std::size_t i = 0; i < n_test; ++i) test_ids.insert(ids[cursor++]);

  CorpusSplit split;
  for (const auto& record : records) {
    if (val_ids.count(record.pedestrian_id))
      split.val.push_back(record);
    else if (test_ids.count(record.pedestrian_id))
      split.test.push_back(record);
    else
      split.train.push_back(record);
  }
  return split;
}

}  // namespace pedintent

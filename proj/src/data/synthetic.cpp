#include "pedintent/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pedintent {

bool scene_allows_crossing(const PlantedSceneFactors& f) {
  return f.signal == SignalState::Red ||
         (f.ego_speed == SpeedLevel::Low &&
          f.other_vehicle_speed == SpeedLevel::Low);
}

Intent intent_from_factors(const PlantedSceneFactors& f) {
  return f.engaged_roadside ? Intent::NoCross : Intent::Cross;
}

namespace {

bool waiting(const PlantedSceneFactors& f) { return !scene_allows_crossing(f); }

}  // namespace

const std::vector<PlantedRule>& planted_rules() {
  static const std::vector<PlantedRule> rules{
      {0, Intent::Cross, "waiting with exactly one neighbouring pedestrian",
       [](const PlantedSceneFactors& f) { return waiting(f) && f.group_size == 1; }},
      {1, Intent::Cross, "waiting at a crosswalk for a safe gap",
       [](const PlantedSceneFactors& f) { return waiting(f) && f.at_crosswalk; }},
      {2, Intent::Cross, "waiting within a group of pedestrians",
       [](const PlantedSceneFactors& f) { return waiting(f) && f.group_size >= 2; }},
      {3, Intent::Cross, "waiting while the signal is still green",
       [](const PlantedSceneFactors& f) { return waiting(f); }},
      {4, Intent::Cross, "waiting because the ego vehicle is fast",
       [](const PlantedSceneFactors& f) {
         return waiting(f) && f.ego_speed == SpeedLevel::High;
       }},
      {5, Intent::Cross, "waiting because other traffic is fast",
       [](const PlantedSceneFactors& f) {
         return waiting(f) && f.other_vehicle_speed == SpeedLevel::High;
       }},
      {6, Intent::Cross, "waiting for all vehicles to slow down",
       [](const PlantedSceneFactors& f) {
         return waiting(f) && f.ego_speed == SpeedLevel::High &&
                f.other_vehicle_speed == SpeedLevel::High;
       }},
      {7, Intent::Cross, "yielding to a fast ego vehicle without a gesture",
       [](const PlantedSceneFactors& f) {
         return waiting(f) && f.ego_speed == SpeedLevel::High && !f.acknowledges_ego;
       }},
      {8, Intent::Cross, "crossing after gesturing at the ego vehicle",
       [](const PlantedSceneFactors& f) {
         return scene_allows_crossing(f) && f.acknowledges_ego;
       }},
      {9, Intent::Cross, "crossing because the signal is red",
       [](const PlantedSceneFactors& f) {
         return scene_allows_crossing(f) && f.signal == SignalState::Red;
       }},
      {10, Intent::Cross, "crossing at a crosswalk while all traffic is slow",
       [](const PlantedSceneFactors& f) {
         return scene_allows_crossing(f) && f.ego_speed == SpeedLevel::Low &&
                f.other_vehicle_speed == SpeedLevel::Low && f.at_crosswalk;
       }},
      {11, Intent::Cross, "crossing because the ego vehicle is slow",
       [](const PlantedSceneFactors& f) {
         return scene_allows_crossing(f) && f.ego_speed == SpeedLevel::Low;
       }},
      {12, Intent::Cross, "crossing because other traffic is slow",
       [](const PlantedSceneFactors& f) {
         return scene_allows_crossing(f) &&
                f.other_vehicle_speed == SpeedLevel::Low;
       }},
      {13, Intent::Cross, "crossing on green without any gesture",
       [](const PlantedSceneFactors& f) {
         return scene_allows_crossing(f) && f.signal == SignalState::Green &&
                !f.acknowledges_ego;
       }},
      {14, Intent::NoCross, "chatting with exactly one other pedestrian",
       [](const PlantedSceneFactors& f) { return f.group_size == 1; }},
      {15, Intent::NoCross, "part of a roadside group",
       [](const PlantedSceneFactors& f) { return f.group_size >= 2; }},
      {16, Intent::NoCross, "occupied with roadside activity",
       [](const PlantedSceneFactors&) { return true; }},
  };
  return rules;
}

std::vector<int> reasons_from_factors(const PlantedSceneFactors& f, Intent intent) {
  std::vector<int> out;
  for (const auto& rule : planted_rules())
    if (rule.gate == intent && rule.fires(f)) out.push_back(rule.reason_id);
  return out;
}

std::vector<PlantedSceneFactors> enumerate_factor_space() {
  std::vector<PlantedSceneFactors> out;
  for (int signal = 0; signal < 2; ++signal)
    for (int ego = 0; ego < 2; ++ego)
      for (int other = 0; other < 2; ++other)
        for (int group = 0; group <= 4; ++group)
          for (int cw = 0; cw < 2; ++cw)
            for (int engaged = 0; engaged < 2; ++engaged)
              for (int ack = 0; ack < 2; ++ack) {
                PlantedSceneFactors f;
                f.signal = signal ? SignalState::Red : SignalState::Green;
                f.ego_speed = ego ? SpeedLevel::High : SpeedLevel::Low;
                f.other_vehicle_speed = other ? SpeedLevel::High : SpeedLevel::Low;
                f.group_size = group;
                f.at_crosswalk = cw != 0;
                f.engaged_roadside = engaged != 0;
                f.acknowledges_ego = ack != 0;
                out.push_back(f);
              }
  return out;
}

namespace {

// Factor distributions; documented in docs/synthetic-model.md.
constexpr double kPEngaged = 0.235;
constexpr double kPRed = 0.45;
constexpr double kPEgoHigh = 0.5;
constexpr double kPOtherHigh = 0.5;
constexpr double kPCrosswalk = 0.6;
constexpr double kPAck = 0.3;
// group_size probabilities for 0..4
constexpr double kPGroup[5] = {0.30, 0.35, 0.20, 0.10, 0.05};

PlantedSceneFactors sample_factors(Rng& rng) {
  PlantedSceneFactors f;
  f.engaged_roadside = rng.uniform() < kPEngaged;
  f.signal = rng.uniform() < kPRed ? SignalState::Red : SignalState::Green;
  f.ego_speed = rng.uniform() < kPEgoHigh ? SpeedLevel::High : SpeedLevel::Low;
  f.other_vehicle_speed =
      rng.uniform() < kPOtherHigh ? SpeedLevel::High : SpeedLevel::Low;
  const double g = rng.uniform();
  double acc = 0.0;
  f.group_size = 4;
  for (int i = 0; i < 5; ++i) {
    acc += kPGroup[i];
    if (g < acc) {
      f.group_size = i;
      break;
    }
  }
  f.at_crosswalk = rng.uniform() < kPCrosswalk;
  f.acknowledges_ego = rng.uniform() < kPAck;
  return f;
}

std::string pedestrian_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ped_%05zu", index);
  return buf;
}

std::string video_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "video_%04zu", index / 50);
  return buf;
}

std::vector<FrameBox> sample_track(Rng& rng, const PlantedSceneFactors& f,
                                   Intent intent, std::size_t min_frames,
                                   std::size_t max_frames) {
  const auto count = static_cast<std::size_t>(
      rng.uniform_int(static_cast<std::int64_t>(min_frames),
                      static_cast<std::int64_t>(max_frames)));
  const long long start = rng.uniform_int(0, 200);
  const double bw = rng.uniform(0.03, 0.08);
  const double bh = std::min(bw * rng.uniform(2.2, 2.8), 0.45);
  double cx = rng.uniform(0.25, 0.75);
  double cy = rng.uniform(0.35, 0.70);
  // Lateral drift: brisk when the scene lets a crossing pedestrian go,
  // negligible while loitering or waiting.
  double vx = 0.0;
  if (intent == Intent::Cross && scene_allows_crossing(f))
    vx = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.004, 0.010);
  std::vector<FrameBox> frames;
  frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    cx += vx + rng.uniform(-0.002, 0.002);
    cy += rng.uniform(-0.001, 0.001);
    cx = std::clamp(cx, bw / 2 + 0.01, 1.0 - bw / 2 - 0.01);
    cy = std::clamp(cy, bh / 2 + 0.01, 1.0 - bh / 2 - 0.01);
    FrameBox fb;
    fb.frame = start + static_cast<long long>(i);
    fb.bbox = {cx - bw / 2, cy - bh / 2, cx + bw / 2, cy + bh / 2};
    frames.push_back(fb);
  }
  return frames;
}

}  // namespace

GeneratedCorpus generate_synthetic(const SyntheticConfig& config,
                                   const ReasonVocabulary& vocab) {
  if (config.noise_rate < 0.0 || config.noise_rate >= 0.5)
    throw ConfigError("generate_synthetic: noise_rate must be in [0, 0.5)");
  if (config.min_frames == 0 || config.min_frames > config.max_frames)
    throw ConfigError("generate_synthetic: bad frame-count range");
  if (config.feature_width < 8)
    throw ConfigError("generate_synthetic: feature_width must be at least 8");

  GeneratedCorpus corpus;
  corpus.config = config;
  corpus.records.reserve(config.n_records);
  for (std::size_t k = 0; k < config.n_records; ++k) {
    Rng rng(mix_seed(config.seed, k));
    const PlantedSceneFactors f = sample_factors(rng);

    AnnotationRecord record;
    record.pedestrian_id = pedestrian_name(k);
    record.video_id = video_name(k);
    record.intent = intent_from_factors(f);
    record.frames =
        sample_track(rng, f, record.intent, config.min_frames, config.max_frames);
    record.critical_frame = record.frames.back().frame;

    if (config.noise_rate > 0.0 && rng.uniform() < config.noise_rate)
      record.intent =
          record.intent == Intent::Cross ? Intent::NoCross : Intent::Cross;
    record.reasons = reasons_from_factors(f, record.intent);
    if (config.noise_rate > 0.0) {
      std::vector<int> kept;
      for (int id : record.reasons)
        if (rng.uniform() >= config.noise_rate) kept.push_back(id);
      if (kept.empty()) kept.push_back(record.reasons.front());
      record.reasons = std::move(kept);
    }

    validate_record(record, vocab);
    corpus.factors.emplace(record.pedestrian_id, f);
    corpus.records.push_back(std::move(record));
  }
  return corpus;
}

std::vector<double> toy_frame_features(const PlantedSceneFactors& f, StreamKind kind,
                                       const std::string& pedestrian_id,
                                       long long frame, std::size_t width,
                                       double sigma, std::uint64_t corpus_seed) {
  if (width < 8) throw ConfigError("toy_frame_features: width must be at least 8");
  const std::uint64_t ped_seed = mix_seed(corpus_seed, hash_string(pedestrian_id));
  const std::uint64_t stream_seed =
      mix_seed(ped_seed, kind == StreamKind::Local ? 1 : 2);

  std::vector<double> row(width, 0.0);
  // Per-record appearance texture, constant over the track.
  Rng texture(mix_seed(stream_seed, 0));
  for (auto& v : row) v = texture.uniform(-0.5, 0.5);

  const double phase = static_cast<double>(frame);
  if (kind == StreamKind::Global) {
    row[0] = f.signal == SignalState::Red ? 1.0 : -1.0;
    row[1] = f.ego_speed == SpeedLevel::High ? 1.0 : -1.0;
    row[2] = f.other_vehicle_speed == SpeedLevel::High ? 1.0 : -1.0;
    row[3] = f.at_crosswalk ? 1.0 : -1.0;
    row[4] = static_cast<double>(f.group_size) / 4.0;
    row[5] = 1.0;
    // A visual patch encoder separates a lone companion from a group
    // categorically, so the emulation exposes those bands directly rather
    // than forcing the downstream model to learn them from the density.
    row[6] = f.group_size == 1 ? 1.0 : -1.0;
    row[7] = f.group_size >= 2 ? 1.0 : -1.0;
  } else {
    row[0] = f.engaged_roadside ? 1.0 : -1.0;
    row[1] = f.acknowledges_ego ? 1.0 : -1.0;
    row[2] = std::sin(0.35 * phase);
    row[3] = std::cos(0.23 * phase);
    row[4] = f.group_size > 0 ? 1.0 : -1.0;
    row[5] = 1.0;
  }

  if (sigma > 0.0) {
    Rng jitter(mix_seed(stream_seed, 1 + static_cast<std::uint64_t>(frame)));
    for (auto& v : row) v += sigma * jitter.normal();
  }
  return row;
}

ToyFeatureProvider::ToyFeatureProvider(const GeneratedCorpus& corpus, StreamKind kind)
    : kind_(kind),
      width_(corpus.config.feature_width),
      sigma_(corpus.config.feature_noise),
      seed_(corpus.config.seed),
      factors_(&corpus.factors) {}

std::vector<double> ToyFeatureProvider::features(const std::string& pedestrian_id,
                                                 long long frame) const {
  auto it = factors_->find(pedestrian_id);
  if (it == factors_->end())
    throw ValidationError("toy features: unknown pedestrian '" + pedestrian_id + "'");
  return toy_frame_features(it->second, kind_, pedestrian_id, frame, width_, sigma_,
                            seed_);
}

void write_feature_file(const GeneratedCorpus& corpus, StreamKind kind,
                        const std::filesystem::path& path) {
  std::vector<FeatureRow> rows;
  for (const auto& record : corpus.records) {
    const auto& f = corpus.factors.at(record.pedestrian_id);
    for (const auto& fb : record.frames) {
      FeatureRow row;
      row.pedestrian_id = record.pedestrian_id;
      row.frame = fb.frame;
      row.values =
          toy_frame_features(f, kind, record.pedestrian_id, fb.frame,
                             corpus.config.feature_width,
                             corpus.config.feature_noise, corpus.config.seed);
      rows.push_back(std::move(row));
    }
  }
  save_features(rows, path);
}

}  // namespace pedintent

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pedintent/data/annotation.hpp"
#include "pedintent/rng.hpp"
#include "pedintent/tfe/features.hpp"

namespace pedintent {

enum class SignalState { Red, Green };
enum class SpeedLevel { Low, High };

// Latent scene description behind one synthetic pedestrian. Reasons and
// intent are deterministic functions of these factors (see planted_rules);
// the toy featurizer renders them into the two visual streams.
struct PlantedSceneFactors {
  SignalState signal = SignalState::Green;
  SpeedLevel ego_speed = SpeedLevel::Low;
  SpeedLevel other_vehicle_speed = SpeedLevel::Low;
  int group_size = 0;  // nearby pedestrians, 0..4
  bool at_crosswalk = false;
  bool engaged_roadside = false;
  bool acknowledges_ego = false;
};

// True when the scene lets the pedestrian cross right now: a red signal, or
// both observed vehicles moving slowly.
bool scene_allows_crossing(const PlantedSceneFactors& f);

// A pedestrian has crossing intent unless engaged in roadside activity.
Intent intent_from_factors(const PlantedSceneFactors& f);

// One row of the shipped rule table: reason `reason_id` is active when the
// record's intent matches `gate` and `fires` holds for the factors.
struct PlantedRule {
  int reason_id;
  Intent gate;
  const char* description;
  bool (*fires)(const PlantedSceneFactors&);
};

// The full rule table, ascending by reason id, one rule per vocabulary
// entry. Shipped as data so tests can enumerate label implications.
const std::vector<PlantedRule>& planted_rules();

// Active reason ids for the given factors under the given intent gate,
// ascending. Never empty for an intent consistent with this rule table.
std::vector<int> reasons_from_factors(const PlantedSceneFactors& f, Intent intent);

// Every factor combination with group_size 0..4 (320 rows), for exhaustive
// property checks.
std::vector<PlantedSceneFactors> enumerate_factor_space();

struct SyntheticConfig {
  std::size_t n_records = 1000;
  std::uint64_t seed = 1;
  double noise_rate = 0.0;    // in [0, 0.5)
  std::size_t min_frames = 10;
  std::size_t max_frames = 18;
  std::size_t feature_width = 16;  // d_v, at least 8
  double feature_noise = 0.05;     // jitter sigma inside the featurizer
};

struct GeneratedCorpus {
  std::vector<AnnotationRecord> records;
  std::map<std::string, PlantedSceneFactors> factors;  // by pedestrian id
  SyntheticConfig config;
};

// Seeded, deterministic, parallel-partitionable: record k depends only on
// mix_seed(config.seed, k). Label noise keeps records schema-valid: with
// probability noise_rate the intent flips (reasons re-derived under the
// flipped gate), then each active reason is independently dropped with
// probability noise_rate, keeping the lowest-id reason if the set would
// empty. See docs/synthetic-model.md for the factor distributions.
GeneratedCorpus generate_synthetic(const SyntheticConfig& config,
                                   const ReasonVocabulary& vocab);

// Deterministic per-frame features for one stream. Slot layout (width >= 8):
// fixed +-1 factor coordinates first, then per-record texture; every slot
// carries seeded Gaussian jitter scaled by `sigma` (0 disables it). The
// same (factors, stream, pedestrian, frame, seed, width, sigma) always
// yields the same row, so file-backed and in-memory providers agree.
std::vector<double> toy_frame_features(const PlantedSceneFactors& f, StreamKind kind,
                                       const std::string& pedestrian_id,
                                       long long frame, std::size_t width,
                                       double sigma, std::uint64_t corpus_seed);

// In-memory featurizer over a generated corpus.
class ToyFeatureProvider : public FeatureProvider {
 public:
  ToyFeatureProvider(const GeneratedCorpus& corpus, StreamKind kind);

  std::size_t width() const override { return width_; }
  std::vector<double> features(const std::string& pedestrian_id,
                               long long frame) const override;

 private:
  StreamKind kind_;
  std::size_t width_;
  double sigma_;
  std::uint64_t seed_;
  const std::map<std::string, PlantedSceneFactors>* factors_;
};

// Writes the feature file for one stream (one row per record frame, record
// order), matching ToyFeatureProvider output value-for-value.
void write_feature_file(const GeneratedCorpus& corpus, StreamKind kind,
                        const std::filesystem::path& path);

}  // namespace pedintent

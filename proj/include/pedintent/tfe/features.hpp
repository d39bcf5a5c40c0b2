#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pedintent/common.hpp"

namespace pedintent {

// One windowed observation: t frames of local-context features, global-
// context features, and normalized bounding boxes.
struct ObservationSequence {
  std::size_t t = 0;
  std::size_t d_v = 0;
  std::vector<double> local_feats;   // t x d_v
  std::vector<double> global_feats;  // t x d_v
  std::vector<double> boxes;         // t x 4, (x1, y1, x2, y2) in [0, 1]
};

// Throws ValidationError on inconsistent extents, non-finite values,
// out-of-range or inverted boxes.
void validate_observation(const ObservationSequence& obs);

enum class StreamKind { Local, Global };

inline const char* to_string(StreamKind kind) {
  return kind == StreamKind::Local ? "local" : "global";
}

// Source of per-frame appearance features for one stream. Implementations:
// the file-backed provider below and the toy featurizer that renders
// planted scene factors (see data/synthetic.hpp).
class FeatureProvider {
 public:
  virtual ~FeatureProvider() = default;
  virtual std::size_t width() const = 0;
  virtual std::vector<double> features(const std::string& pedestrian_id,
                                       long long frame) const = 0;
};

// Feature file format: one line per (pedestrian, frame),
// `<pedestrian_id> <frame> <v1> ... <v_dv>`, LF, UTF-8, shortest
// round-trip reals. Lookup of a row that is not in the file is a
// validation error.
class FileFeatureProvider : public FeatureProvider {
 public:
  explicit FileFeatureProvider(const std::filesystem::path& path);

  std::size_t width() const override { return width_; }
  std::vector<double> features(const std::string& pedestrian_id,
                               long long frame) const override;

  std::size_t rows() const { return rows_.size(); }

 private:
  std::size_t width_ = 0;
  std::string source_;
  std::map<std::pair<std::string, long long>, std::vector<double>> rows_;
};

struct FeatureRow {
  std::string pedestrian_id;
  long long frame = 0;
  std::vector<double> values;
};

void save_features(const std::vector<FeatureRow>& rows,
                   const std::filesystem::path& path);

}  // namespace pedintent

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "pedintent/graph/vocabulary.hpp"

namespace pedintent {

struct FrameBox {
  long long frame = 0;
  std::array<double, 4> bbox{};  // x1, y1, x2, y2
};

// One annotated pedestrian: a bounding-box track over the observation
// frames, a binary crossing intent, and the set of textual-reason ids that
// explain it. Every frame index is at or before critical_frame, the last
// usable observation point.
struct AnnotationRecord {
  std::string pedestrian_id;
  std::string video_id;
  std::vector<FrameBox> frames;
  Intent intent = Intent::NoCross;
  std::vector<int> reasons;  // ascending, unique
  long long critical_frame = 0;
};

// Throws ValidationError naming the pedestrian on any schema breach:
// empty reason set, a reason whose intent class contradicts the record,
// non-increasing frames, or frames past critical_frame.
void validate_record(const AnnotationRecord& record, const ReasonVocabulary& vocab);

// Line-delimited JSON, one record per line, UTF-8. Save is atomic and
// deterministic; load validates every record and reports the failing line.
void save_corpus(const std::vector<AnnotationRecord>& corpus,
                 const std::filesystem::path& path);
std::vector<AnnotationRecord> load_corpus(const std::filesystem::path& path,
                                          const ReasonVocabulary& vocab);

}  // namespace pedintent

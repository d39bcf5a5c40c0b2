#include "pedintent/data/annotation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "pedintent/util/io.hpp"

namespace pedintent {

using nlohmann::json;

void validate_record(const AnnotationRecord& record, const ReasonVocabulary& vocab) {
  const std::string who = "record '" + record.pedestrian_id + "'";
  if (record.pedestrian_id.empty())
    throw ValidationError("record with empty pedestrian_id");
  if (record.reasons.empty())
    throw ValidationError(who + ": empty reason set");
  for (std::size_t i = 0; i < record.reasons.size(); ++i) {
    const int id = record.reasons[i];
    if (i > 0 && record.reasons[i - 1] >= id)
      throw ValidationError(who + ": reasons must be ascending and unique");
    if (vocab.intent_of(id) != record.intent)
      throw ValidationError(who + ": reason " + std::to_string(id) + " (" +
                            vocab.entry(id).text + ") belongs to intent class " +
                            to_string(vocab.intent_of(id)) + ", record is " +
                            to_string(record.intent));
  }
  if (record.frames.empty())
    throw ValidationError(who + ": no frames");
  for (std::size_t i = 0; i < record.frames.size(); ++i) {
    const auto& fb = record.frames[i];
    if (i > 0 && record.frames[i - 1].frame >= fb.frame)
      throw ValidationError(who + ": frame indices must be strictly increasing");
    if (fb.frame > record.critical_frame)
      throw ValidationError(who + ": frame " + std::to_string(fb.frame) +
                            " is past critical_frame " +
                            std::to_string(record.critical_frame));
    for (double v : fb.bbox)
      if (!std::isfinite(v))
        throw ValidationError(who + ": non-finite bbox coordinate at frame " +
                              std::to_string(fb.frame));
    if (fb.bbox[0] >= fb.bbox[2] || fb.bbox[1] >= fb.bbox[3])
      throw ValidationError(who + ": degenerate bbox at frame " +
                            std::to_string(fb.frame));
  }
}

namespace {

json record_to_json(const AnnotationRecord& r) {
  json frames = json::array();
  for (const auto& fb : r.frames)
    frames.push_back(
        json::array({fb.frame, fb.bbox[0], fb.bbox[1], fb.bbox[2], fb.bbox[3]}));
  return json{{"pedestrian_id", r.pedestrian_id}, {"video_id", r.video_id},
              {"intent", to_string(r.intent)},    {"reasons", r.reasons},
              {"critical_frame", r.critical_frame}, {"frames", std::move(frames)}};
}

AnnotationRecord record_from_json(const json& j) {
  AnnotationRecord r;
  r.pedestrian_id = j.at("pedestrian_id").get<std::string>();
  r.video_id = j.at("video_id").get<std::string>();
  r.intent = intent_from_string(j.at("intent").get<std::string>());
  r.reasons = j.at("reasons").get<std::vector<int>>();
  r.critical_frame = j.at("critical_frame").get<long long>();
  for (const auto& row : j.at("frames")) {
    if (!row.is_array() || row.size() != 5)
      throw ValidationError("frame entry must be [frame, x1, y1, x2, y2]");
    FrameBox fb;
    fb.frame = row[0].get<long long>();
    for (int c = 0; c < 4; ++c)
      fb.bbox[static_cast<std::size_t>(c)] = row[static_cast<std::size_t>(c) + 1].get<double>();
    r.frames.push_back(fb);
  }
  return r;
}

}  // namespace

void save_corpus(const std::vector<AnnotationRecord>& corpus,
                 const std::filesystem::path& path) {
  std::ostringstream out;
  for (const auto& r : corpus) out << record_to_json(r).dump() << '\n';
  atomic_write_text(path, out.str());
}

std::vector<AnnotationRecord> load_corpus(const std::filesystem::path& path,
                                          const ReasonVocabulary& vocab) {
  std::istringstream in(read_text_file(path));
  std::vector<AnnotationRecord> corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      AnnotationRecord r = record_from_json(json::parse(line));
      validate_record(r, vocab);
      corpus.push_back(std::move(r));
    } catch (const json::exception& err) {
      throw ValidationError("corpus " + path.string() + " line " +
                            std::to_string(line_no) + ": " + err.what());
    } catch (const ValidationError& err) {
      throw ValidationError("corpus " + path.string() + " line " +
                            std::to_string(line_no) + ": " + err.what());
    }
  }
  return corpus;
}

}  // namespace pedintent

#include "pedintent/graph/vocabulary.hpp"

#include <sstream>

#include "pedintent/util/io.hpp"

namespace pedintent {

ReasonVocabulary ReasonVocabulary::defaults() {
  std::vector<ReasonEntry> entries{
      {0, Intent::Cross, "Waiting to cross with a neighbouring pedestrian"},
      {1, Intent::Cross, "Waiting for a safe passage to cross"},
      {2, Intent::Cross, "Waiting to cross with a group of pedestrians"},
      {3, Intent::Cross, "Waiting for the signal to turn red"},
      {4, Intent::Cross, "Waiting since the ego-vehicle speed is high"},
      {5, Intent::Cross, "Waiting since the vehicle speed is high"},
      {6, Intent::Cross, "Waiting for vehicles to slow down"},
      {7, Intent::Cross, "Waiting while giving right-of-way to ego-vehicle"},
      {8, Intent::Cross, "Pedestrian acknowledges ego-vehicle to stop"},
      {9, Intent::Cross, "Pedestrian intends to cross since the signal is red"},
      {10, Intent::Cross, "Pedestrian intends to cross since it’s a safe passage"},
      {11, Intent::Cross, "Pedestrian intends to cross since ego-vehicle speed is slow"},
      {12, Intent::Cross, "Pedestrian intends to cross since vehicle speed is slow"},
      {13, Intent::Cross, "Neglects the ego-vehicle"},
      {14, Intent::NoCross, "Two pedestrians just interacting (on road-side)"},
      {15, Intent::NoCross, "Group of pedestrians just interacting (on road-side)"},
      {16, Intent::NoCross, "Pedestrians doing their work on road-side"},
  };
  return ReasonVocabulary(std::move(entries));
}

ReasonVocabulary::ReasonVocabulary(std::vector<ReasonEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw ValidationError("vocabulary: no entries");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].id != static_cast<int>(i))
      throw ValidationError("vocabulary: ids must be dense 0.." +
                            std::to_string(entries_.size() - 1) + ", entry " +
                            std::to_string(i) + " has id " +
                            std::to_string(entries_[i].id));
    if (entries_[i].text.empty())
      throw ValidationError("vocabulary: entry " + std::to_string(i) +
                            " has empty text");
  }
}

const ReasonEntry& ReasonVocabulary::entry(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= entries_.size())
    throw ValidationError("vocabulary: reason id " + std::to_string(id) +
                          " out of range 0.." + std::to_string(entries_.size() - 1));
  return entries_[static_cast<std::size_t>(id)];
}

std::vector<int> ReasonVocabulary::ids_for(Intent intent) const {
  std::vector<int> out;
  for (const auto& e : entries_)
    if (e.intent == intent) out.push_back(e.id);
  return out;
}

// File format: one entry per line, `id<TAB>C|NC<TAB>text`, UTF-8.
void ReasonVocabulary::save(const std::filesystem::path& path) const {
  std::ostringstream out;
  for (const auto& e : entries_)
    out << e.id << '\t' << to_string(e.intent) << '\t' << e.text << '\n';
  atomic_write_text(path, out.str());
}

ReasonVocabulary ReasonVocabulary::load(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<ReasonEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? std::string::npos
                                                : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos)
      throw ValidationError("vocabulary " + path.string() + " line " +
                            std::to_string(line_no) +
                            ": expected id<TAB>class<TAB>text");
    ReasonEntry entry;
    try {
      entry.id = std::stoi(line.substr(0, tab1));
    } catch (const std::exception&) {
      throw ValidationError("vocabulary " + path.string() + " line " +
                            std::to_string(line_no) + ": bad id field");
    }
    entry.intent = intent_from_string(line.substr(tab1 + 1, tab2 - tab1 - 1));
    entry.text = line.substr(tab2 + 1);
    entries.push_back(std::move(entry));
  }
  return ReasonVocabulary(std::move(entries));
}

}  // namespace pedintent

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pedintent/common.hpp"

namespace pedintent {

struct ReasonEntry {
  int id;
  Intent intent;
  std::string text;
};

// The label space for textual crossing reasons. Ids are dense 0..n-1. The
// default vocabulary has 17 entries: 14 reasons attached to crossing intent
// followed by 3 attached to no-cross intent.
class ReasonVocabulary {
 public:
  static ReasonVocabulary defaults();
  static ReasonVocabulary load(const std::filesystem::path& path);

  explicit ReasonVocabulary(std::vector<ReasonEntry> entries);

  void save(const std::filesystem::path& path) const;

  std::size_t size() const { return entries_.size(); }
  const ReasonEntry& entry(int id) const;
  const std::vector<ReasonEntry>& entries() const { return entries_; }
  Intent intent_of(int id) const { return entry(id).intent; }

  // Ids carrying the given intent class, ascending.
  std::vector<int> ids_for(Intent intent) const;

 private:
  std::vector<ReasonEntry> entries_;
};

}  // namespace pedintent

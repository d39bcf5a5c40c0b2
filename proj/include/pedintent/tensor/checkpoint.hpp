#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pedintent/tensor/params.hpp"

namespace pedintent {

// Checkpoints are two sibling files sharing a stem: `<stem>.json` holds the
// manifest (parameter names, shapes, byte offsets, plus a caller-supplied
// `extra` object) and `<stem>.bin` holds every value as consecutive
// little-endian float64, in registry insertion order. Round trips are
// bit-exact.

void save_checkpoint(const ParamStore& store, const std::filesystem::path& stem,
                     const nlohmann::json& extra = nlohmann::json::object());

struct LoadedCheckpoint {
  ParamStore store;
  nlohmann::json extra;
};

LoadedCheckpoint load_checkpoint(const std::filesystem::path& stem);

}  // namespace pedintent

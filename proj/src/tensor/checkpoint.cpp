#include "pedintent/tensor/checkpoint.hpp"

#include "pedintent/util/io.hpp"

namespace pedintent {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFormatName = "pedintent-checkpoint";
constexpr int kFormatVersion = 1;

fs::path manifest_path(const fs::path& stem) {
  fs::path p = stem;
  p += ".json";
  return p;
}

fs::path blob_path(const fs::path& stem) {
  fs::path p = stem;
  p += ".bin";
  return p;
}

}  // namespace

void save_checkpoint(const ParamStore& store, const fs::path& stem, const json& extra) {
  json manifest;
  manifest["format"] = kFormatName;
  manifest["version"] = kFormatVersion;
  manifest["blob"] = blob_path(stem).filename().string();
  manifest["extra"] = extra;

  std::vector<std::uint8_t> blob;
  blob.reserve(store.total_values() * 8);
  json params = json::array();
  for (const auto& p : store.params()) {
    json entry;
    entry["name"] = p.name;
    entry["shape"] = p.shape;
    entry["offset"] = blob.size();
    entry["count"] = p.value.size();
    params.push_back(std::move(entry));
    for (double v : p.value) append_f64_le(blob, v);
  }
  manifest["params"] = std::move(params);

  atomic_write_binary(blob_path(stem), blob);
  atomic_write_text(manifest_path(stem), manifest.dump(2) + "\n");
}

LoadedCheckpoint load_checkpoint(const fs::path& stem) {
  json manifest;
  try {
    manifest = json::parse(read_text_file(manifest_path(stem)));
  } catch (const json::parse_error& err) {
    throw ValidationError("checkpoint manifest " + manifest_path(stem).string() +
                          " is not valid JSON: " + err.what());
  }
  if (manifest.value("format", "") != kFormatName)
    throw ValidationError("checkpoint manifest " + manifest_path(stem).string() +
                          " has unexpected format tag");
  const fs::path blob_file = stem.parent_path() / manifest.at("blob").get<std::string>();
  const auto blob = read_binary_file(blob_file);

  LoadedCheckpoint out;
  out.extra = manifest.value("extra", json::object());
  for (const auto& entry : manifest.at("params")) {
    const auto name = entry.at("name").get<std::string>();
    const auto shape = entry.at("shape").get<Shape>();
    const auto offset = entry.at("offset").get<std::size_t>();
    const auto count = entry.at("count").get<std::size_t>();
    if (count != shape_numel(shape))
      throw ValidationError("checkpoint parameter '" + name +
                            "' count disagrees with its shape");
    if (offset + count * 8 > blob.size())
      throw ValidationError("checkpoint blob " + blob_file.string() +
                            " is too short for parameter '" + name + "'");
    std::vector<double> value(count);
    for (std::size_t i = 0; i < count; ++i)
      value[i] = read_f64_le(blob.data() + offset + i * 8);
    out.store.add(name, shape, std::move(value));
  }
  return out;
}

}  // namespace pedintent

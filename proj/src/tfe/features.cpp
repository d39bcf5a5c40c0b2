#include "pedintent/tfe/features.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "pedintent/util/io.hpp"

namespace pedintent {

void validate_observation(const ObservationSequence& obs) {
  if (obs.t == 0) throw ValidationError("observation: t must be at least 1");
  if (obs.d_v == 0) throw ValidationError("observation: zero feature width");
  if (obs.local_feats.size() != obs.t * obs.d_v ||
      obs.global_feats.size() != obs.t * obs.d_v)
    throw ValidationError("observation: feature extents do not match t x d_v");
  if (obs.boxes.size() != obs.t * 4)
    throw ValidationError("observation: box extent does not match t x 4");
  for (double v : obs.local_feats)
    if (!std::isfinite(v)) throw ValidationError("observation: non-finite local feature");
  for (double v : obs.global_feats)
    if (!std::isfinite(v)) throw ValidationError("observation: non-finite global feature");
  for (std::size_t i = 0; i < obs.t; ++i) {
    const double* b = obs.boxes.data() + i * 4;
    for (int c = 0; c < 4; ++c)
      if (!std::isfinite(b[c]) || b[c] < 0.0 || b[c] > 1.0)
        throw ValidationError("observation: box coordinate outside [0,1] at step " +
                              std::to_string(i));
    if (b[0] > b[2] || b[1] > b[3])
      throw ValidationError("observation: inverted box at step " + std::to_string(i));
  }
}

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc())
    throw NumericalError("format_double: value does not fit the buffer");
  return std::string(buf, end);
}

}  // namespace

FileFeatureProvider::FileFeatureProvider(const std::filesystem::path& path)
    : source_(path.string()) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "features " + source_ + " line " + std::to_string(line_no);
    std::istringstream fields(line);
    std::string ped, token;
    long long frame = 0;
    if (!(fields >> ped >> frame))
      throw ValidationError(where + ": expected pedestrian id and frame");
    std::vector<double> values;
    while (fields >> token) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || ptr != token.data() + token.size())
        throw ValidationError(where + ": bad real '" + token + "'");
      values.push_back(v);
    }
    if (values.empty()) throw ValidationError(where + ": no feature values");
    if (width_ == 0) width_ = values.size();
    if (values.size() != width_)
      throw ValidationError(where + ": width " + std::to_string(values.size()) +
                            " differs from earlier width " + std::to_string(width_));
    if (!rows_.emplace(std::make_pair(ped, frame), std::move(values)).second)
      throw ValidationError(where + ": duplicate (pedestrian, frame) row");
  }
  if (rows_.empty())
    throw ValidationError("features " + source_ + ": empty file");
}

std::vector<double> FileFeatureProvider::features(const std::string& pedestrian_id,
                                                  long long frame) const {
  auto it = rows_.find(std::make_pair(pedestrian_id, frame));
  if (it == rows_.end())
    throw ValidationError("features " + source_ + ": no row for pedestrian '" +
                          pedestrian_id + "' frame " + std::to_string(frame));
  return it->second;
}

void save_features(const std::vector<FeatureRow>& rows,
                   const std::filesystem::path& path) {
  std::ostringstream out;
  for (const auto& row : rows) {
    out << row.pedestrian_id << ' ' << row.frame;
    for (double v : row.values) out << ' ' << format_double(v);
    out << '\n';
  }
  atomic_write_text(path, out.str());
}

}  // namespace pedintent

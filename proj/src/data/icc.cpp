#include "pedintent/data/icc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "pedintent/util/io.hpp"

namespace pedintent {

void validate_ratings(const RaterMatrix& m) {
  if (m.subjects < 2 || m.raters < 2)
    throw ValidationError("ratings matrix must have at least 2 subjects and 2 raters");
  if (m.ratings.size() != m.subjects * m.raters)
    throw ValidationError("ratings matrix has " + std::to_string(m.ratings.size()) +
                          " cells, expected " +
                          std::to_string(m.subjects * m.raters));
  for (double v : m.ratings)
    if (!std::isfinite(v))
      throw ValidationError("ratings matrix contains a non-finite cell");
}

const char* to_string(IccModel model) {
  switch (model) {
    case IccModel::Oneway:
      return "oneway";
    case IccModel::TwowayRandomConsistency:
      return "twoway_random_consistency";
    case IccModel::TwowayRandomAgreement:
      return "twoway_random_agreement";
  }
  return "unknown";
}

IccModel icc_model_from_string(const std::string& name) {
  if (name == "oneway") return IccModel::Oneway;
  if (name == "twoway_random_consistency") return IccModel::TwowayRandomConsistency;
  if (name == "twoway_random_agreement") return IccModel::TwowayRandomAgreement;
  throw ConfigError("unknown ICC model '" + name + "'");
}

double icc(const RaterMatrix& m, IccModel model) {
  validate_ratings(m);
  const auto n = static_cast<double>(m.subjects);
  const auto k = static_cast<double>(m.raters);

  double grand = 0.0;
  for (double v : m.ratings) grand += v;
  grand /= n * k;

  std::vector<double> row_mean(m.subjects, 0.0), col_mean(m.raters, 0.0);
  for (std::size_t i = 0; i < m.subjects; ++i)
    for (std::size_t j = 0; j < m.raters; ++j) {
      row_mean[i] += m.at(i, j);
      col_mean[j] += m.at(i, j);
    }
  for (auto& v : row_mean) v /= k;
  for (auto& v : col_mean) v /= n;

  double ss_total = 0.0;
  for (std::size_t i = 0; i < m.subjects; ++i)
    for (std::size_t j = 0; j < m.raters; ++j) {
      const double d = m.at(i, j) - grand;
      ss_total += d * d;
    }
  double ss_rows = 0.0;
  for (double r : row_mean) ss_rows += (r - grand) * (r - grand);
  ss_rows *= k;
  double ss_cols = 0.0;
  for (double c : col_mean) ss_cols += (c - grand) * (c - grand);
  ss_cols *= n;

  // Residual sums of squares can drift a hair below zero when variance is
  // tiny; clamp before dividing.
  const double ss_within = std::max(ss_total - ss_rows, 0.0);
  const double ss_error = std::max(ss_total - ss_rows - ss_cols, 0.0);

  const double bms = ss_rows / (n - 1.0);
  const double wms = ss_within / (n * (k - 1.0));
  const double jms = ss_cols / (k - 1.0);
  const double ems = ss_error / ((n - 1.0) * (k - 1.0));

  double numerator = 0.0, denominator = 0.0;
  switch (model) {
    case IccModel::Oneway:
      numerator = bms - wms;
      denominator = bms + (k - 1.0) * wms;
      break;
    case IccModel::TwowayRandomConsistency:
      numerator = bms - ems;
      denominator = bms + (k - 1.0) * ems;
      break;
    case IccModel::TwowayRandomAgreement:
      numerator = bms - ems;
      denominator = bms + (k - 1.0) * ems + (k / n) * (jms - ems);
      break;
  }
  if (denominator == 0.0)
    throw NumericalError("ICC undefined: ANOVA denominator is zero");
  return numerator / denominator;
}

namespace {

double parse_rating(const std::string& cell, std::size_t line_no) {
  std::size_t begin = cell.find_first_not_of(" \t");
  std::size_t end = cell.find_last_not_of(" \t");
  if (begin == std::string::npos)
    throw IoError("ratings line " + std::to_string(line_no) + ": empty cell");
  double value = 0.0;
  const char* first = cell.data() + begin;
  const char* last = cell.data() + end + 1;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw IoError("ratings line " + std::to_string(line_no) + ": bad number '" +
                  cell.substr(begin, end - begin + 1) + "'");
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(pos));
      break;
    }
    cells.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return cells;
}

}  // namespace

RaterMatrix load_ratings_csv(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
    pos = nl + 1;
  }
  if (lines.size() < 2)
    throw IoError("ratings file '" + path.string() +
                  "' needs a header row and at least one subject row");

  const std::size_t raters = split_csv_line(lines[0]).size();
  RaterMatrix m;
  m.raters = raters;
  m.subjects = lines.size() - 1;
  m.ratings.reserve(m.subjects * raters);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split_csv_line(lines[i]);
    if (cells.size() != raters)
      throw IoError("ratings line " + std::to_string(i + 1) + ": expected " +
                    std::to_string(raters) + " cells, got " +
                    std::to_string(cells.size()));
    for (const auto& cell : cells) m.ratings.push_back(parse_rating(cell, i + 1));
  }
  validate_ratings(m);
  return m;
}

}  // namespace pedintent

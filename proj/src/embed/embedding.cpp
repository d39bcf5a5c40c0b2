#include "pedintent/embed/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "pedintent/rng.hpp"
#include "pedintent/util/io.hpp"

namespace pedintent {

const std::vector<double>& EmbeddingTable::at(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= vectors.size())
    throw ValidationError("embedding table: id " + std::to_string(id) +
                          " out of range");
  return vectors[static_cast<std::size_t>(id)];
}

void validate_table(const EmbeddingTable& table, const ReasonVocabulary& vocab) {
  if (table.vectors.size() != vocab.size())
    throw ValidationError("embedding table has " +
                          std::to_string(table.vectors.size()) +
                          " vectors, vocabulary has " + std::to_string(vocab.size()));
  if (table.width == 0) throw ValidationError("embedding table: zero width");
  for (std::size_t id = 0; id < table.vectors.size(); ++id) {
    if (table.vectors[id].size() != table.width)
      throw ValidationError("embedding for id " + std::to_string(id) + " has width " +
                            std::to_string(table.vectors[id].size()) + ", expected " +
                            std::to_string(table.width));
    for (double v : table.vectors[id])
      if (!std::isfinite(v))
        throw ValidationError("embedding for id " + std::to_string(id) +
                              " has a non-finite entry");
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

double parse_double(const std::string& token, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ValidationError(where + ": bad real '" + token + "'");
  return v;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ULL ^ mix_seed(seed, 0x9e37);
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void l2_normalize(std::vector<double>& v, std::size_t fallback_index) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    // Degenerate cancellation; fall back to a basis vector so the table
    // stays valid.
    v[fallback_index % v.size()] = 1.0;
    return;
  }
  for (double& x : v) x /= norm;
}

}  // namespace

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               const ReasonVocabulary& vocab) {
  std::istringstream in(read_text_file(path));
  std::map<int, std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "embeddings " + path.string() + " line " +
                              std::to_string(line_no);
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    int id = 0;
    try {
      id = std::stoi(token);
    } catch (const std::exception&) {
      throw ValidationError(where + ": bad id '" + token + "'");
    }
    std::vector<double> vec;
    while (fields >> token) vec.push_back(parse_double(token, where));
    if (vec.empty()) throw ValidationError(where + ": no vector values");
    if (width == 0) width = vec.size();
    if (vec.size() != width)
      throw ValidationError(where + ": width " + std::to_string(vec.size()) +
                            " differs from earlier width " + std::to_string(width));
    if (!rows.emplace(id, std::move(vec)).second)
      throw ValidationError(where + ": duplicate id " + std::to_string(id));
  }
  EmbeddingTable table;
  table.width = width;
  table.provider_tag = "file";
  table.vectors.resize(vocab.size());
  for (const auto& entry : vocab.entries()) {
    auto it = rows.find(entry.id);
    if (it == rows.end())
      throw ValidationError("embeddings " + path.string() + ": missing id " +
                            std::to_string(entry.id));
    table.vectors[static_cast<std::size_t>(entry.id)] = std::move(it->second);
    rows.erase(it);
  }
  if (!rows.empty())
    throw ValidationError("embeddings " + path.string() + ": id " +
                          std::to_string(rows.begin()->first) +
                          " is not in the vocabulary");
  validate_table(table, vocab);
  return table;
}

void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path) {
  std::ostringstream out;
  for (std::size_t id = 0; id < table.vectors.size(); ++id) {
    out << id;
    for (double v : table.vectors[id]) out << ' ' << format_double(v);
    out << '\n';
  }
  atomic_write_text(path, out.str());
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

const std::vector<std::string>& stopwords() {
  static const std::vector<std::string> words{
      "a",  "an",  "and",  "are", "at",    "by", "for",  "in",   "is",
      "it", "its", "just", "of",  "on",    "or", "s",    "since", "the",
      "their", "them", "they", "to", "while", "with"};
  return words;
}

std::vector<std::string> content_words(const std::string& text) {
  const auto& stops = stopwords();
  std::vector<std::string> out;
  for (auto& token : tokenize(text))
    if (std::find(stops.begin(), stops.end(), token) == stops.end())
      out.push_back(token);
  return out;
}

EmbeddingTable toy_embed(const ReasonVocabulary& vocab, std::size_t d,
                         std::uint64_t seed) {
  if (d < 2) throw ConfigError("toy_embed: width must be at least 2");
  EmbeddingTable table;
  table.width = d;
  table.provider_tag = "toy-hash";
  table.vectors.resize(vocab.size());
  for (const auto& entry : vocab.entries()) {
    std::vector<double> vec(d, 0.0);
    for (const auto& token : tokenize(entry.text)) {
      const std::uint64_t h = fnv1a(token, seed);
      // Two buckets per token; halves the chance that distinct tokens
      // cancel while keeping the construction deterministic.
      vec[h % d] += (h >> 63) ? -1.0 : 1.0;
      vec[(h >> 17) % d] += ((h >> 62) & 1) ? -1.0 : 1.0;
    }
    l2_normalize(vec, static_cast<std::size_t>(entry.id));
    table.vectors[static_cast<std::size_t>(entry.id)] = std::move(vec);
  }
  validate_table(table, vocab);
  return table;
}

WordVectors load_word_vectors(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  WordVectors words;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "word vectors " + path.string() + " line " +
                              std::to_string(line_no);
    std::istringstream fields(line);
    std::string word, token;
    if (!(fields >> word)) continue;
    std::vector<double> vec;
    while (fields >> token) vec.push_back(parse_double(token, where));
    if (vec.empty()) throw ValidationError(where + ": no vector values");
    if (width == 0) width = vec.size();
    if (vec.size() != width)
      throw ValidationError(where + ": ragged width");
    if (!words.emplace(word, std::move(vec)).second)
      throw ValidationError(where + ": duplicate word '" + word + "'");
  }
  if (words.empty())
    throw ValidationError("word vectors " + path.string() + ": empty file");
  return words;
}

void save_word_vectors(const WordVectors& words, const std::filesystem::path& path) {
  std::ostringstream out;
  for (const auto& [word, vec] : words) {
    out << word;
    for (double v : vec) out << ' ' << format_double(v);
    out << '\n';
  }
  atomic_write_text(path, out.str());
}

WordVectors toy_word_vectors(const ReasonVocabulary& vocab, std::size_t d,
                             std::uint64_t seed) {
  if (d < 2) throw ConfigError("toy_word_vectors: width must be at least 2");
  WordVectors words;
  for (const auto& entry : vocab.entries()) {
    for (const auto& token : content_words(entry.text)) {
      if (words.count(token)) continue;
      Rng rng(mix_seed(seed, fnv1a(token, 0)));
      std::vector<double> vec(d);
      for (auto& v : vec) v = rng.normal();
      words.emplace(token, std::move(vec));
    }
  }
  return words;
}

EmbeddingTable word_average_embed(const ReasonVocabulary& vocab,
                                  const WordVectors& words) {
  if (words.empty()) throw ValidationError("word_average_embed: no word vectors");
  const std::size_t d = words.begin()->second.size();
  EmbeddingTable table;
  table.width = d;
  table.provider_tag = "word-average";
  table.vectors.resize(vocab.size());
  for (const auto& entry : vocab.entries()) {
    std::vector<double> mean(d, 0.0);
    std::size_t covered = 0;
    for (const auto& token : content_words(entry.text)) {
      auto it = words.find(token);
      if (it == words.end()) continue;
      if (it->second.size() != d)
        throw ValidationError("word_average_embed: vector for '" + token +
                              "' has width " + std::to_string(it->second.size()) +
                              ", expected " + std::to_string(d));
      for (std::size_t i = 0; i < d; ++i) mean[i] += it->second[i];
      ++covered;
    }
    if (covered == 0)
      throw ValidationError("word_average_embed: no covered content words for '" +
                            entry.text + "'");
    for (double& v : mean) v /= static_cast<double>(covered);
    l2_normalize(mean, static_cast<std::size_t>(entry.id));
    table.vectors[static_cast<std::size_t>(entry.id)] = std::move(mean);
  }
  validate_table(table, vocab);
  return table;
}

Tensor embeddings_to_tensor(Tape& tape, const EmbeddingTable& table) {
  std::vector<double> flat;
  flat.reserve(table.vectors.size() * table.width);
  for (const auto& vec : table.vectors)
    flat.insert(flat.end(), vec.begin(), vec.end());
  return tape.constant({table.vectors.size(), table.width}, std::move(flat));
}

}  // namespace pedintent

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pedintent/graph/vocabulary.hpp"
#include "pedintent/tensor/tensor.hpp"

namespace pedintent {

// Fixed (non-trainable) reason-sentence embeddings, one vector per
// vocabulary id. Only the graph convolution downstream adapts them.
struct EmbeddingTable {
  std::size_t width = 0;
  std::vector<std::vector<double>> vectors;  // indexed by reason id
  std::string provider_tag;                  // file | toy-hash | word-average

  const std::vector<double>& at(int id) const;
};

// Throws ValidationError unless every vocabulary id has exactly one finite
// vector of uniform width.
void validate_table(const EmbeddingTable& table, const ReasonVocabulary& vocab);

// File format (bit-exact contract): one line per reason,
// `<id> <v1> ... <vd>`, shortest-round-trip decimal reals, LF, UTF-8.
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               const ReasonVocabulary& vocab);
void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path);

// Lowercases and splits on non-alphanumeric bytes: "ego-vehicle" becomes
// {"ego", "vehicle"}.
std::vector<std::string> tokenize(const std::string& text);

// Fixed stopword list used when reducing a reason sentence to its content
// words. Documented in docs/formats.md.
const std::vector<std::string>& stopwords();
std::vector<std::string> content_words(const std::string& text);

// Deterministic self-contained embedder: every token is hashed into two of
// the d buckets with a data-dependent sign, token contributions are summed
// and the result L2-normalized. Sentences sharing content words land closer
// in cosine than disjoint ones.
EmbeddingTable toy_embed(const ReasonVocabulary& vocab, std::size_t d,
                         std::uint64_t seed);

// Word vectors for the word-averaging variant, keyed by token.
using WordVectors = std::map<std::string, std::vector<double>>;

WordVectors load_word_vectors(const std::filesystem::path& path);
void save_word_vectors(const WordVectors& words, const std::filesystem::path& path);

// Deterministic toy word vectors covering every content word in the
// vocabulary; lets the word-averaging path run without external files.
WordVectors toy_word_vectors(const ReasonVocabulary& vocab, std::size_t d,
                             std::uint64_t seed);

// Mean of the covered content-word vectors per reason, L2-normalized.
// Words absent from `words` are skipped; a reason with zero covered words
// is a validation error.
EmbeddingTable word_average_embed(const ReasonVocabulary& vocab,
                                  const WordVectors& words);

// [n, d] constant tensor, rows in id order.
Tensor embeddings_to_tensor(Tape& tape, const EmbeddingTable& table);

}  // namespace pedintent

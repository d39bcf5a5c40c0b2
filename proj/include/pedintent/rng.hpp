#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace pedintent {

// Deterministic random source. std::mt19937_64 has a fully specified
// sequence, but the standard distributions do not, so uniform and normal
// draws are implemented here directly. Two runs with the same seed produce
// bit-identical streams on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the spare value is cached.
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Uniform integer in [lo, hi], both inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Fisher-Yates shuffle driven by uniform_int.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
      auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i)));
      std::swap(items[i], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Splitmix64 step, used to derive independent per-record and per-epoch
// seeds from a base seed without correlating the streams.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

// FNV-1a over the raw bytes, for turning string ids into seed salts.
std::uint64_t hash_string(const std::string& text);

}  // namespace pedintent

#pragma once

#include <stdexcept>
#include <string>

namespace pedintent {

// Error taxonomy. Every failure surfaced by the library is one of these;
// the command line tool maps them onto process exit codes.

// Bad input data: malformed files, schema violations, out-of-range ids.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape mismatch between tensors or parameter groups.
class DimensionError : public std::runtime_error {
 public:
  explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite value produced by a numeric kernel, or a degenerate
// denominator in a statistic.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Inconsistent or incomplete run configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem failure: missing file, unwritable directory, short read.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Binary crossing intent. Cross is the positive class (label 1).
enum class Intent { NoCross = 0, Cross = 1 };

inline const char* to_string(Intent intent) {
  return intent == Intent::Cross ? "C" : "NC";
}

inline Intent intent_from_string(const std::string& s) {
  if (s == "C") return Intent::Cross;
  if (s == "NC") return Intent::NoCross;
  throw ValidationError("unknown intent class '" + s + "' (expected C or NC)");
}

}  // namespace pedintent

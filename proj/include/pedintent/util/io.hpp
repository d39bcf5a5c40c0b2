#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pedintent {

// Reads a whole file; IoError with the path on any failure.
std::string read_text_file(const std::filesystem::path& path);
std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);

// Writes via a sibling temp file followed by an atomic rename, so a crash
// mid-write never leaves a truncated artifact behind.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);
void atomic_write_binary(const std::filesystem::path& path,
                         const std::vector<std::uint8_t>& content);

// Output paths are normally used as given. When PEDINTENT_OUT_DIR is set,
// relative output paths are resolved under it instead; absolute paths are
// never rewritten. This is the only environment variable the library reads.
std::filesystem::path resolve_output_path(const std::filesystem::path& path);

// Little-endian float64 packing used by the checkpoint blob.
void append_f64_le(std::vector<std::uint8_t>& out, double value);
double read_f64_le(const std::uint8_t* bytes);

}  // namespace pedintent

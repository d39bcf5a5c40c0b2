#include "pedintent/util/io.hpp"

#include <bit>
#include <cstdlib>
#include <fstream>

#include "pedintent/common.hpp"

namespace pedintent {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path.string());
  return content;
}

std::vector<std::uint8_t> read_binary_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::vector<std::uint8_t> content((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path.string());
  return content;
}

namespace {

void atomic_write(const fs::path& path, const char* data, std::size_t len) {
  fs::path dir = path.parent_path();
  if (!dir.empty()) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(data, static_cast<std::streamsize>(len));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() +
                        ": " + ec.message());
}

}  // namespace

void atomic_write_text(const fs::path& path, const std::string& content) {
  atomic_write(path, content.data(), content.size());
}

void atomic_write_binary(const fs::path& path, const std::vector<std::uint8_t>& content) {
  atomic_write(path, reinterpret_cast<const char*>(content.data()), content.size());
}

fs::path resolve_output_path(const fs::path& path) {
  if (path.is_absolute()) return path;
  const char* base = std::getenv("PEDINTENT_OUT_DIR");
  if (base == nullptr || *base == '\0') return path;
  return fs::path(base) / path;
}

void append_f64_le(std::vector<std::uint8_t>& out, double value) {
  const auto bits = std::bit_cast<std::uint64_t>(value);
  for (int shift = 0; shift < 64; shift += 8)
    out.push_back(static_cast<std::uint8_t>((bits >> shift) & 0xff));
}

double read_f64_le(const std::uint8_t* bytes) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i)
    bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace pedintent

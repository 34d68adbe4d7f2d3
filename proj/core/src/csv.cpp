// -----------------------------------------------------------------------------
// csv.cpp
// -----------------------------------------------------------------------------

#include "lobcal/csv.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lobcal/errors.hpp"

namespace lobcal {

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string format_price(std::int64_t ticks, double tick) {
  return format_double(static_cast<double>(ticks) * tick);
}

std::string format_ts(std::int64_t ts_ms) {
  const int ms = static_cast<int>(ts_ms % 1000);
  const auto total_s = ts_ms / 1000;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d:%02d:%02d:%03d",
                static_cast<int>(total_s / 3600), static_cast<int>((total_s / 60) % 60),
                static_cast<int>(total_s % 60), ms);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string render_manifest(
    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string out;
  for (const auto& [key, value] : entries) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

}  // namespace lobcal

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lobcal {

// -----------------------------------------------------------------------------
// Deterministic text formatting for CSV outputs and run manifests
// -----------------------------------------------------------------------------
//
// Doubles are rendered with std::to_chars (shortest round-trip form), so
// identical runs produce byte-identical files on any conforming toolchain.
// -----------------------------------------------------------------------------

// Shortest decimal string that round-trips to the same double ("6023.5",
// "0.2355", "1e-06"). Empty cells are the caller's concern.
std::string format_double(double value);

// Price in quote units from a tick count ("6023.5" for 12047 half-ticks).
std::string format_price(std::int64_t ticks, double tick);

// Milliseconds since midnight as HH:MM:SS:mmm.
std::string format_ts(std::int64_t ts_ms);

// Writes `content` to path, creating parent directories; Error(io) on failure.
void write_text_file(const std::string& path, const std::string& content);

// Reads a whole file; Error(io) when it cannot be opened.
std::string read_text_file(const std::string& path);

// key=value lines in insertion order.
std::string render_manifest(const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace lobcal

// -----------------------------------------------------------------------------
// lob.cpp
// -----------------------------------------------------------------------------
//
// Raw feed parsing, book reconstruction, execution detection and equidistant
// resampling. See lob.hpp for the feed format and replay rules.
// -----------------------------------------------------------------------------

#include "lobcal/lob.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "lobcal/errors.hpp"

namespace lobcal {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Splits a line on ';' without collapsing empty fields.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(';', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

/// HH:MM:SS:mmm -> milliseconds since midnight.
std::int64_t parse_timestamp(std::string_view field, long line_no) {
  std::array<std::string_view, 4> parts;
  std::size_t start = 0;
  for (int i = 0; i < 4; ++i) {
    const std::size_t pos = field.find(':', start);
    const bool last = (i == 3);
    if (last != (pos == std::string_view::npos))
      throw Error(ErrorKind::parse, "timestamp must be HH:MM:SS:mmm", line_no);
    parts[i] = last ? field.substr(start) : field.substr(start, pos - start);
    start = pos + 1;
  }
  for (const auto part : parts)
    if (!all_digits(part))
      throw Error(ErrorKind::parse, "timestamp must be HH:MM:SS:mmm", line_no);
  auto to_int = [](std::string_view s) {
    int v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
  };
  const int hh = to_int(parts[0]), mm = to_int(parts[1]), ss = to_int(parts[2]),
            ms = to_int(parts[3]);
  if (hh > 23 || mm > 59 || ss > 59 || ms > 999 || parts[3].size() != 3)
    throw Error(ErrorKind::parse, "timestamp field out of range", line_no);
  return ((hh * 60LL + mm) * 60 + ss) * 1000 + ms;
}

std::int64_t parse_size(std::string_view field, long line_no) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || v < 0)
    throw Error(ErrorKind::parse, "size must be a non-negative integer", line_no);
  return v;
}

/// Price in quote units -> tick count; rejects negatives and off-grid prices.
std::int64_t parse_price_ticks(std::string_view field, double tick, long line_no) {
  if (field.empty())
    throw Error(ErrorKind::parse, "empty price field", line_no);
  std::string tmp(field);
  char* end = nullptr;
  const double px = std::strtod(tmp.c_str(), &end);
  if (end != tmp.c_str() + tmp.size() || !std::isfinite(px) || px < 0)
    throw Error(ErrorKind::parse, "price must be a non-negative number", line_no);
  if (px == 0.0) return 0;
  const double in_ticks = px / tick;
  const auto ticks = static_cast<std::int64_t>(std::llround(in_ticks));
  if (std::abs(in_ticks - static_cast<double>(ticks)) > 1e-6)
    throw Error(ErrorKind::parse, "price not aligned to the tick size", line_no);
  return ticks;
}

}  // namespace

ParseResult parse_raw(std::string_view text, const BookConfig& cfg) {
  if (cfg.depth <= 0 || cfg.tick <= 0)
    throw Error(ErrorKind::config, "book depth and tick size must be positive");

  ParseResult result;
  std::int64_t prev_ts = -1;
  long line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }

    const auto fields = split_fields(line);
    if (fields.size() != 6)
      throw Error(ErrorKind::parse, "expected 6 ';'-separated fields, got " +
                                        std::to_string(fields.size()),
                  line_no);

    LobUpdate u;
    u.ts_ms = parse_timestamp(fields[0], line_no);

    int level = 0;
    {
      const auto f = fields[1];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), level);
      if (ec != std::errc() || ptr != f.data() + f.size() || level < 0)
        throw Error(ErrorKind::parse, "level must be a non-negative integer", line_no);
    }
    u.level = level;
    u.bid_ticks = parse_price_ticks(fields[2], cfg.tick, line_no);
    u.ask_ticks = parse_price_ticks(fields[3], cfg.tick, line_no);
    u.bid_size = parse_size(fields[4], line_no);
    u.ask_size = parse_size(fields[5], line_no);

    if (prev_ts >= 0 && u.ts_ms < prev_ts) {
      ++result.non_monotone_timestamps;
      result.warnings.push_back("line " + std::to_string(line_no) +
                                ": timestamp moves backwards");
    }
    prev_ts = u.ts_ms;

    if (u.level >= cfg.depth) {
      ++result.skipped_deep_levels;
      result.warnings.push_back("line " + std::to_string(line_no) + ": level " +
                                std::to_string(u.level) + " beyond depth " +
                                std::to_string(cfg.depth) + ", skipped");
      continue;
    }
    result.updates.push_back(u);
  }
  return result;
}

std::vector<LobSnapshot> reconstruct(const std::vector<LobUpdate>& updates,
                                     const BookConfig& cfg) {
  if (cfg.depth <= 0)
    throw Error(ErrorKind::config, "book depth must be positive");

  std::vector<LobSnapshot> snapshots;
  std::vector<LobLevel> book(cfg.depth);
  bool clear_best_next = false;

  std::size_t i = 0;
  while (i < updates.size()) {
    // One revision = the maximal run of updates sharing a timestamp. The
    // matched best quote from the previous revision is consumed before this
    // revision's writes, so a level-0 update here takes precedence.
    if (clear_best_next) {
      book[0] = LobLevel{};
      clear_best_next = false;
    }
    const std::int64_t ts = updates[i].ts_ms;
    for (; i < updates.size() && updates[i].ts_ms == ts; ++i) {
      const LobUpdate& u = updates[i];
      book[u.level] = LobLevel{u.bid_ticks, u.ask_ticks, u.bid_size, u.ask_size};
    }
    snapshots.push_back(LobSnapshot{ts, book});
    if (snapshots.back().matched()) clear_best_next = true;
  }
  return snapshots;
}

std::vector<Execution> detect_executions(const std::vector<LobSnapshot>& snapshots) {
  std::vector<Execution> out;
  for (const auto& snap : snapshots) {
    if (!snap.matched()) continue;
    const LobLevel& best = snap.levels[0];
    out.push_back(Execution{snap.ts_ms, best.bid_ticks,
                            std::min(best.bid_size, best.ask_size)});
  }
  return out;
}

double ResampledSeries::start_price(std::size_t i, Side side, StartMode mode) const {
  if (mode == StartMode::mid) return mid[i];
  return side == Side::bid ? best_bid[i] : best_ask[i];
}

std::optional<double> ResampledSeries::distance(std::size_t i, Side side, int level,
                                                StartMode mode) const {
  if (i >= size() || !valid[i] || level < 0 || level >= depth) return std::nullopt;
  const double px = (side == Side::bid ? bid_px : ask_px)[i][level];
  if (px == 0.0) return std::nullopt;
  const double s = start_price(i, side, mode);
  if (s <= 0.0) return std::nullopt;
  return px - s;
}

int ResampledSeries::deepest_level(std::size_t i, Side side) const {
  if (i >= size()) return -1;
  const auto& px = (side == Side::bid ? bid_px : ask_px)[i];
  for (int level = depth - 1; level >= 0; --level)
    if (px[level] != 0.0) return level;
  return -1;
}

ResampledSeries resample(const std::vector<LobSnapshot>& snapshots, double dt_s,
                         const BookConfig& cfg) {
  if (snapshots.empty())
    throw Error(ErrorKind::domain, "cannot resample an empty snapshot sequence");
  const auto dt_ms = static_cast<std::int64_t>(std::llround(dt_s * 1000.0));
  if (!(dt_s > 0) || dt_ms < 1)
    throw Error(ErrorKind::domain, "resampling step must be at least 1 ms");

  ResampledSeries out;
  out.dt_s = dt_s;
  out.tick = cfg.tick;
  out.depth = cfg.depth;

  const std::int64_t t0 = snapshots.front().ts_ms;
  const std::int64_t t_end = snapshots.back().ts_ms;
  const auto n_grid = static_cast<std::size_t>((t_end - t0) / dt_ms + 1);

  out.ts_ms.reserve(n_grid);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < n_grid; ++k) {
    const std::int64_t t = t0 + static_cast<std::int64_t>(k) * dt_ms;
    while (idx + 1 < snapshots.size() && snapshots[idx + 1].ts_ms <= t) ++idx;
    const LobSnapshot& snap = snapshots[idx];

    out.ts_ms.push_back(t);
    std::vector<double> bids(cfg.depth, 0.0), asks(cfg.depth, 0.0);
    const int levels = std::min<int>(cfg.depth, static_cast<int>(snap.levels.size()));
    for (int l = 0; l < levels; ++l) {
      bids[l] = static_cast<double>(snap.levels[l].bid_ticks) * cfg.tick;
      asks[l] = static_cast<double>(snap.levels[l].ask_ticks) * cfg.tick;
    }
    const double bb = bids[0], ba = asks[0];
    const bool ok = bb > 0.0 && ba > 0.0;
    out.best_bid.push_back(bb);
    out.best_ask.push_back(ba);
    out.mid.push_back(ok ? 0.5 * (bb + ba) : 0.0);
    out.valid.push_back(ok ? 1 : 0);
    out.bid_px.push_back(std::move(bids));
    out.ask_px.push_back(std::move(asks));
  }
  return out;
}

}  // namespace lobcal

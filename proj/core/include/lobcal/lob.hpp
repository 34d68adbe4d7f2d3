#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lobcal {

// -----------------------------------------------------------------------------
// Limit-order-book ingestion
// -----------------------------------------------------------------------------
//
// Raw feed format, one update per line:
//
//   HH:MM:SS:mmm; level; bid; ask; bidsize; asksize
//
// Updates sharing a timestamp form one book revision. Each update overwrites
// its level; untouched levels carry forward; the book starts blank. A zero
// price or size means "no quote at this level". Prices are stored internally
// as integer tick counts so snapshot round-trips are bit-exact.
//
// When a revision leaves the best bid equal to the best ask (both nonzero) an
// execution has occurred; the matched level-0 quote is cleared at the next
// distinct timestamp unless that revision overwrites level 0 itself.
// -----------------------------------------------------------------------------

enum class Side { bid, ask };

// How the reference price S is chosen when measuring a level's distance D:
// the best quote of the level's own side, or the mid-price.
enum class StartMode { relevant_best, mid };

struct BookConfig {
  int depth = 5;      // price levels tracked per side
  double tick = 0.5;  // quote-unit price increment
};

struct LobUpdate {
  std::int64_t ts_ms = 0;  // milliseconds since midnight
  int level = 0;
  std::int64_t bid_ticks = 0;  // price / tick; 0 = no quote
  std::int64_t ask_ticks = 0;
  std::int64_t bid_size = 0;
  std::int64_t ask_size = 0;
};

struct LobLevel {
  std::int64_t bid_ticks = 0;
  std::int64_t ask_ticks = 0;
  std::int64_t bid_size = 0;
  std::int64_t ask_size = 0;

  bool operator==(const LobLevel&) const = default;
};

struct LobSnapshot {
  std::int64_t ts_ms = 0;
  std::vector<LobLevel> levels;  // size = BookConfig::depth, index 0 = best

  bool matched() const {
    return !levels.empty() && levels[0].bid_ticks != 0 &&
           levels[0].bid_ticks == levels[0].ask_ticks;
  }
};

struct ParseResult {
  std::vector<LobUpdate> updates;
  std::vector<std::string> warnings;  // human-readable, one per incident
  int skipped_deep_levels = 0;        // level >= depth, dropped
  int non_monotone_timestamps = 0;    // timestamp below its predecessor
};

// Parses the raw feed text. Malformed lines raise Error(parse) carrying the
// 1-based line number; levels beyond cfg.depth and non-monotone timestamps
// are tolerated and reported through the counters above.
ParseResult parse_raw(std::string_view text, const BookConfig& cfg);

// Replays updates into one snapshot per distinct timestamp, applying the
// carry-forward, last-write-wins and execution-clearing rules above.
std::vector<LobSnapshot> reconstruct(const std::vector<LobUpdate>& updates,
                                     const BookConfig& cfg);

struct Execution {
  std::int64_t ts_ms = 0;
  std::int64_t price_ticks = 0;  // matched price
  std::int64_t size = 0;         // min(bid size, ask size) at level 0
};

// One event per snapshot whose best bid equals its best ask (nonzero);
// consecutive matched snapshots at the same price are distinct events.
std::vector<Execution> detect_executions(const std::vector<LobSnapshot>& snapshots);

// -----------------------------------------------------------------------------
// Equidistant resampling (last observation carried forward)
// -----------------------------------------------------------------------------

struct ResampledSeries {
  double dt_s = 30.0;
  double tick = 0.5;
  int depth = 5;

  std::vector<std::int64_t> ts_ms;  // t0 + k * dt, anchored at the first snapshot
  std::vector<double> mid;          // (best bid + best ask) / 2, 0 when invalid
  std::vector<double> best_bid;     // quote units, 0 when absent
  std::vector<double> best_ask;
  std::vector<std::uint8_t> valid;  // both level-0 quotes present

  // Per grid point, per level: price in quote units, 0 = level empty. These
  // are plain doubles (not ticks) so synthetic series used in tests may carry
  // off-grid prices; series produced by resample() are always tick-aligned.
  std::vector<std::vector<double>> bid_px;  // [i][level]
  std::vector<std::vector<double>> ask_px;

  std::size_t size() const { return ts_ms.size(); }

  // Reference price for measuring distances on `side`.
  double start_price(std::size_t i, Side side, StartMode mode) const;

  // Signed distance D of the level's price from the reference (ask >= 0,
  // bid <= 0); nullopt when the grid point is invalid or the level is empty.
  std::optional<double> distance(std::size_t i, Side side, int level,
                                 StartMode mode) const;

  // Deepest occupied level on `side` at grid point i, or -1.
  int deepest_level(std::size_t i, Side side) const;
};

// Samples the snapshot sequence on a strict dt_s grid anchored at the first
// snapshot's timestamp, carrying the latest snapshot forward. Raises
// Error(domain) when snapshots are empty or dt_s is not positive.
ResampledSeries resample(const std::vector<LobSnapshot>& snapshots, double dt_s,
                         const BookConfig& cfg);

}  // namespace lobcal

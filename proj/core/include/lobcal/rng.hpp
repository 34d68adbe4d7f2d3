#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace lobcal {

// -----------------------------------------------------------------------------
// Deterministic random number generation
// -----------------------------------------------------------------------------
//
// All stochastic components of the library draw from this generator rather than
// <random>: the standard library's distributions are implementation-defined,
// which would break byte-identical reproducibility across toolchains.
//
//   * state:   xoshiro256++ (Blackman & Vigna), seeded through SplitMix64
//   * streams: Rng(seed, stream) yields an independent generator per
//              (seed, stream) pair, used for per-path Monte-Carlo streams
//   * normal:  256-layer ziggurat (Marsaglia & Tsang), tables derived once at
//              startup from the canonical tail cut R and checked for closure
//   * expo:    inversion, -log(1 - u)
//
// The identifier below is recorded in run manifests so outputs are traceable
// to the exact algorithm.
// -----------------------------------------------------------------------------

inline constexpr const char* kRngAlgorithm = "splitmix64+xoshiro256++(ziggurat)";

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Ziggurat tables for the standard normal. x_[0] is the virtual base-strip
// edge, x_[1] = R is the tail cut, x_[256] = 0; f_[i] = exp(-x_[i]^2 / 2).
struct ZigguratTables {
  static constexpr int kLayers = 256;
  std::array<double, kLayers + 1> x{};
  std::array<double, kLayers + 1> f{};

  ZigguratTables() {
    const double r = 3.6541528853610088;  // canonical 256-layer tail cut
    auto density = [](double v) { return std::exp(-0.5 * v * v); };
    // Strip area: rectangle part plus the full tail mass beyond R.
    const double tail = std::sqrt(1.5707963267948966) * std::erfc(r / std::sqrt(2.0));
    const double area = r * density(r) + tail;
    x[0] = area / density(r);
    x[1] = r;
    for (int i = 2; i < kLayers; ++i) {
      const double top = area / x[i - 1] + density(x[i - 1]);
      x[i] = std::sqrt(-2.0 * std::log(top));
    }
    x[kLayers] = 0.0;
    for (int i = 0; i <= kLayers; ++i) f[i] = density(x[i]);
    // The recursion must close at the mode: the topmost strip's ceiling is
    // the density maximum, 1. A failure here means the tail cut is wrong.
    const double closure = area / x[kLayers - 1] + density(x[kLayers - 1]);
    if (std::abs(closure - 1.0) > 1e-9) {
      x[0] = std::nan("");  // poisons every draw; caught immediately by tests
    }
  }
};

inline const ZigguratTables& ziggurat() {
  static const ZigguratTables tables;
  return tables;
}

}  // namespace detail

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}

  // Independent stream for a (seed, stream) pair. Streams are decorrelated by
  // running SplitMix64 from a distinct origin per stream index.
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t sm = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    for (auto& word : s_) word = detail::splitmix64(sm);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero is invalid
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log argument.
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via the ziggurat; falls through to the wedge/tail branches
  // on roughly 1.5% of draws.
  double normal() {
    const auto& zt = detail::ziggurat();
    for (;;) {
      const std::uint64_t bits = next_u64();
      const int layer = static_cast<int>(bits & 255);
      const bool negative = (bits & 256) != 0;
      // Bits 11..63 give a 53-bit uniform, disjoint from the layer/sign bits.
      const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
      const double cand = u * zt.x[layer];
      if (cand < zt.x[layer + 1]) return negative ? -cand : cand;
      if (layer == 0) {
        // Tail beyond R: Marsaglia's exponential-rejection tail sampler.
        const double r = zt.x[1];
        double xx, yy;
        do {
          xx = -std::log(uniform_pos()) / r;
          yy = -std::log(uniform_pos());
        } while (yy + yy < xx * xx);
        return negative ? -(r + xx) : (r + xx);
      }
      const double y = zt.f[layer] + uniform() * (zt.f[layer + 1] - zt.f[layer]);
      if (y < std::exp(-0.5 * cand * cand)) return negative ? -cand : cand;
    }
  }

  // Exponential with unit mean.
  double exponential() { return -std::log(uniform_pos()); }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace lobcal

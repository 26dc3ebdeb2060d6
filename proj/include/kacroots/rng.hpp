#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace kacroots::rng {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32-10 block function (Salmon et al., SC'11): a keyed bijection on
/// 128-bit counters. Output depends only on (counter, key).
constexpr Counter philox4x32(Counter ctr, Key key) noexcept {
  constexpr std::uint32_t m0 = 0xD2511F53U;
  constexpr std::uint32_t m1 = 0xCD9E8D57U;
  constexpr std::uint32_t w0 = 0x9E3779B9U;
  constexpr std::uint32_t w1 = 0xBB67AE85U;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += w0;
    key[1] += w1;
  }
  return ctr;
}

/// Random stream addressed by (seed, realization index, stream id).
///
/// Block b of the stream is philox(counter = {b, index_lo, index_hi, stream},
/// key = mix64(seed)). Any realization can be regenerated on its own, so the
/// draws never depend on scheduling or worker count.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t index, std::uint32_t stream) noexcept
      : key_{static_cast<std::uint32_t>(mix64(seed)), static_cast<std::uint32_t>(mix64(seed) >> 32)},
        index_(index),
        stream_(stream) {}

  /// Next pair of independent uniforms in the open interval (0, 1), 53 bits each.
  std::array<double, 2> uniform_pair() noexcept {
    const Counter out = philox4x32(
        {block_++, static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32), stream_},
        key_);
    const std::uint64_t a = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    const std::uint64_t b = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
    return {to_open_unit(a), to_open_unit(b)};
  }

  /// Pair of independent standard normals (Box-Muller).
  std::array<double, 2> normal_pair() noexcept {
    const auto [u1, u2] = uniform_pair();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phase = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phase), r * std::sin(phase)};
  }

  /// Raw 64 random bits.
  std::uint64_t bits() noexcept {
    const Counter out = philox4x32(
        {block_++, static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32), stream_},
        key_);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  }

 private:
  static double to_open_unit(std::uint64_t x) noexcept {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
  }

  Key key_;
  std::uint64_t index_;
  std::uint32_t stream_;
  std::uint32_t block_ = 0;
};

}  // namespace kacroots::rng

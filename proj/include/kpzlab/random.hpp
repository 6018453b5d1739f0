#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace kpz {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to turn (root, stream) counters into seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based substream seed: distinct stream ids never share a seed path.
constexpr std::uint64_t substream_seed(std::uint64_t root, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(root) ^ splitmix64(stream + 0x5851f42d4c957f2dULL));
}

inline Rng make_rng(std::uint64_t root, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(substream_seed(root, stream)),
                    static_cast<std::uint32_t>(substream_seed(root, stream) >> 32)};
  return Rng(seq);
}

inline Rng make_rng(std::uint64_t seed) { return make_rng(seed, 0); }

/// Uniform double in [0, 1) from the top 53 bits; independent of the
/// standard library's distribution implementations.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Exponential variate with the given rate.
inline double exponential(Rng& rng, double rate) { return -std::log1p(-uniform01(rng)) / rate; }

/// Standard normal via Box-Muller (one value per call, the partner is dropped).
inline double normal01(Rng& rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace kpz

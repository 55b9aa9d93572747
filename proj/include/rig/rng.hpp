// Seed derivation and uniform draws.
//
// Every random quantity in the toolkit comes from a std::mt19937_64 whose
// seed is derived with SplitMix64 from (seed, stream, index). Uniforms are
// built from the top 53 bits of one engine output so that results do not
// depend on the standard library's distribution implementations.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace rig {

using Engine64 = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the independent stream number `index` within family `stream`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

/// Uniform on [0, 1).
inline double uniform01(Engine64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1].
inline double uniform01_open_low(Engine64& eng) {
  return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

/// Number of failures before the first success of Bernoulli(p) trials.
/// log1m_p must be log1p(-p); p in (0, 1).
inline std::uint64_t geometric_skip(Engine64& eng, double log1m_p) {
  const double g = std::floor(std::log(uniform01_open_low(eng)) / log1m_p);
  if (!(g < 9.0e18)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(g);
}

}  // namespace rig

#pragma once

#include <cstdint>
#include <random>

namespace acp {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for stream `(a, b)` under `master`. Counter-based, so any
/// replica can be constructed without touching the others.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0) noexcept {
  return mix64(mix64(mix64(master) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

inline Rng make_rng(std::uint64_t seed) { return Rng{mix64(seed)}; }

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double exponential(Rng& rng, double rate) {
  return std::exponential_distribution<double>(rate)(rng);
}

inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

}  // namespace acp

#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, sample index, stream), so work can be split across threads freely.

#include <cstdint>
#include <numbers>

namespace hardyp {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t sample, std::uint64_t stream) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ (sample * 0xD1B54A32D192ED03ULL));
  h = splitmix64(h ^ (stream * 0xABC98388FB8FAC03ULL + 0x8CB92BA72F3D8DD7ULL));
  return h;
}

/// Uniform in [0, 1) with 53 random bits.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t stream) {
  return static_cast<double>(counter_hash(seed, sample, stream) >> 11) * 0x1.0p-53;
}

/// Seed for the i-th case of a seeded corpus.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace hardyp

#pragma once

#include <cstdint>

// Counter-based randomness: every random quantity is a pure function of
// (seed, index). No sequential generator state, so edges and replicates can
// be evaluated in any order, or concurrently, with identical results.

namespace msflab::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// SplitMix64 output function (Steele/Lea/Flood).
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t hash_pair(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + (index + 1) * kGolden);
}

// Uniform on [0,1) at full 53-bit double resolution.
inline double uniform53(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t index) {
  return uniform53(hash_pair(seed, index));
}

// Seed of an independent substream (replicate streams, corpus generators).
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
  return hash_pair(seed ^ 0x5851f42d4c957f2dull, index);
}

}  // namespace msflab::rng

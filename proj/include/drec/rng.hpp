#pragma once

#include <cstdint>
#include <random>

namespace drec {

// splitmix64 finalizer; decorrelates seeds derived from small tags.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(mix64(a, b), c);
}

// Named substreams so every consumer of randomness has its own seed and
// epochs can be replayed independently (stateless across epochs).
enum class RngStream : std::uint64_t {
  kInit = 1,
  kValidationHoldout = 2,
  kBatchShuffle = 3,
  kNegativeSampling = 4,
  kPerturbation = 5,
  kSplit = 6,
  kNoiseInjection = 7,
  kRealPlusN = 8,
};

inline std::mt19937_64 make_rng(std::uint64_t seed, RngStream stream,
                                std::uint64_t index = 0) {
  return std::mt19937_64(
      mix64(seed, static_cast<std::uint64_t>(stream), index));
}

}  // namespace drec

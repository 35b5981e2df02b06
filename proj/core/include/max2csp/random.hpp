#pragma once

#include <cstdint>
#include <random>

namespace max2csp {

/// Engine used throughout the library. Streams are reproducible within one build.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; good avalanche for deriving independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for stream `index` of the family `stream` under `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index = 0) {
  return mix64(mix64(master ^ mix64(stream)) + index);
}

inline Rng make_rng(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0) {
  return Rng(derive_seed(master, stream, index));
}

// Stream tags. Keeping them here avoids accidental reuse across modules.
namespace stream {
inline constexpr std::uint64_t kGenerator = 0x67656e;
inline constexpr std::uint64_t kSolverInit = 0x736470;
inline constexpr std::uint64_t kSolverCandidates = 0x63616e64;
inline constexpr std::uint64_t kRoundingTrial = 0x726e64;
inline constexpr std::uint64_t kNaiveTrial = 0x6e6169;
inline constexpr std::uint64_t kGaussianCheck = 0x67617573;
inline constexpr std::uint64_t kProfile = 0x70726f66;
inline constexpr std::uint64_t kExperiment = 0x657870;
}  // namespace stream

}  // namespace max2csp

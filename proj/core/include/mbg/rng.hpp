#pragma once

#include <cstdint>
#include <random>

namespace mbg {

/// splitmix64 finalizer; good avalanche, cheap.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d4f79bbb5c9f1dULL;
  return z ^ (z >> 31);
}

/// Counter-based derivation of independent seed streams from one root seed,
/// so e.g. adding evaluation trajectories never perturbs the learner stream.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t component, std::uint64_t index = 0) {
  return mix64(mix64(root ^ (component * 0x9e3779b97f4a7c15ULL)) ^ index);
}

namespace stream {
constexpr std::uint64_t learner = 1;
constexpr std::uint64_t evaluator = 2;
constexpr std::uint64_t trajectory = 3;
constexpr std::uint64_t model_gen = 4;
}  // namespace stream

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace mbg

#pragma once

#include <cstdint>
#include <random>

#include "hsg/fp.hpp"

namespace hsg {

using Rng = std::mt19937_64;

/// Independent generator for one stream (trial, block, ...) of a seeded run.
/// Derived with splitmix64 so that stream i does not depend on how many
/// values earlier streams consumed.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return Rng(z);
}

inline Fp uniform_fp(Rng& rng, std::uint64_t p) {
  std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
  return Fp(dist(rng), p);
}

}  // namespace hsg

#pragma once

#include <cstdint>
#include <random>

namespace idtrack {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits; identical on every
/// platform, unlike std::uniform_real_distribution.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for run `run` under lambda index `lambda_index` of a sweep.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t lambda_index,
                                 std::uint64_t run) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ (lambda_index + 0x51ed2701ULL));
  return splitmix64(h ^ (run + 0x7f4a7c15ULL));
}

}  // namespace idtrack

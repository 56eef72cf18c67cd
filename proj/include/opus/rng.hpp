#pragma once

#include <cstdint>
#include <random>

namespace opus {

// splitmix64 step; used to derive independent stream seeds from a master
// seed so that every random decision in a run is reproducible from one value.
inline uint64_t mix_seed(uint64_t seed, uint64_t tag) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(uint64_t seed, uint64_t tag = 0) {
  return std::mt19937_64(mix_seed(seed, tag));
}

}  // namespace opus

#pragma once

#include <cstdint>
#include <random>

namespace noisy {

// Splitting scheme: trial k of a run seeded with s draws from
// mt19937_64(splitmix64(s + k)). Trials are independent streams, so a
// worker pool can evaluate them in any order and still reproduce a run
// bit for bit.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(seed + 0x734c6d2f9a10b3a1ULL * trial));
}

}  // namespace noisy

#pragma once

#include <cstdint>

namespace argmine {

// SplitMix64 finalizer; used to derive independent per-run seeds from a
// global seed and a run index so parallel runs are schedule-independent.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Sets the OpenMP worker count; 0 keeps the runtime default.
void set_worker_count(int workers);
int worker_count();

}  // namespace argmine

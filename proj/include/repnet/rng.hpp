#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace repnet {

// All randomness in a run derives from one 64-bit seed; independent consumers
// get substreams keyed by a label (e.g. "init/f", "train/batch").
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::mt19937_64 substream(std::uint64_t seed, std::string_view label) {
  const std::uint64_t tag = fnv1a(label);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace repnet

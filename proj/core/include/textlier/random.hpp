#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace textlier {

using Rng = std::mt19937_64;

/// 64-bit FNV-1a over raw bytes.
constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t hash = 0xcbf29ce484222325ULL) noexcept {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

/// Named sub-seed for one pipeline stage. Stable as long as the stage name is.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage) noexcept;

}  // namespace textlier

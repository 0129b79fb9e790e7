#include "textlier/random.hpp"

#include <array>

namespace textlier {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage) noexcept {
  std::array<char, 8> raw{};
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<char>((seed >> (8 * i)) & 0xff);
  std::uint64_t h = fnv1a64(std::string_view(raw.data(), raw.size()));
  h = fnv1a64(stage, h);
  // splitmix64 finalizer
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

}  // namespace textlier

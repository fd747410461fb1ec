#include "ideaforge/util/rng.hpp"

namespace ideaforge::util {

std::uint64_t RandomStream::below(std::uint64_t n) {
  if (n == 0) return 0;
  std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view label,
                          std::uint64_t index) {
  // FNV-1a over the label, then splitmix-style mixing with root and index.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  RandomStream mix(root ^ h);
  std::uint64_t s = mix.next_u64();
  RandomStream mix2(s + index * 0x9e3779b97f4a7c15ULL);
  return mix2.next_u64();
}

}  // namespace ideaforge::util

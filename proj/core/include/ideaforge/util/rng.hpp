#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace ideaforge::util {

// Deterministic random stream used everywhere randomness is needed.
// All draws are implemented by hand on top of splitmix64 so that results
// are identical across standard libraries and platforms; std::shuffle and
// the std distributions are implementation-defined and would break replay.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, n) via rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t n);

  // Uniform double in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  template <typename T>
  T pick(const std::vector<T>& v) {
    return v[static_cast<size_t>(below(v.size()))];
  }

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed from a root seed, a label, and an
// index. Labels keep the streams of different stages decoupled so adding
// draws to one stage never perturbs another.
std::uint64_t derive_seed(std::uint64_t root, std::string_view label,
                          std::uint64_t index = 0);

}  // namespace ideaforge::util

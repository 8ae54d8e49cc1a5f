#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace remine {

// Deterministic counter-based generator (splitmix64 core). Everything random
// in the pipeline draws from one run seed through split() so per-stage and
// per-model streams stay independent but reproducible across platforms.
// std:: engines/distributions are avoided on purpose: their output is not
// specified bit-for-bit.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Child stream for an independent subsystem; parent state is untouched.
  SplitRng split(std::uint64_t stream) const {
    std::uint64_t z = state_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return SplitRng(z ^ (z >> 31));
  }

  SplitRng split(std::string_view label) const { return split(fnv1a64(label)); }

  // Uniform in [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n), unbiased via rejection.
  std::size_t next_below(std::size_t n) {
    if (n <= 1) return 0;
    const std::uint64_t bound = n;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return static_cast<std::size_t>(r % bound);
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = next_below(i);
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

  static std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

 private:
  std::uint64_t state_;
};

}  // namespace remine

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace unfold {

// Deterministic sampling helpers. std::uniform_int_distribution's output is
// implementation-defined, so bounded draws are done by hand (rejection on the
// top 64-bit range); identical seeds then give identical samples on any
// standard library.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform integer in [0, n).
  std::uint64_t bounded(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return (eng_() >> 11) * 0x1.0p-53; }

  // k distinct indices from [0, n), in draw order.
  std::vector<std::uint32_t> sample_distinct(std::uint32_t n, std::uint32_t k) {
    std::vector<std::uint32_t> out;
    if (k >= n) {
      out.resize(n);
      for (std::uint32_t i = 0; i < n; ++i) out[i] = i;
      return out;
    }
    std::vector<bool> used(n, false);
    out.reserve(k);
    while (out.size() < k) {
      auto idx = static_cast<std::uint32_t>(bounded(n));
      if (!used[idx]) {
        used[idx] = true;
        out.push_back(idx);
      }
    }
    return out;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace unfold

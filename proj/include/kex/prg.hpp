#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace kex {

// Deterministic, seedable randomness source. All draws go through explicit
// rejection sampling so streams are identical across compilers; std::
// distributions are implementation-defined and never used.
class Prg {
 public:
  explicit Prg(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, bound). bound >= 1.
  uint64_t uniform(uint64_t bound) {
    if (bound <= 1) return 0;
    uint64_t mask = ~uint64_t{0};
    if ((bound & (bound - 1)) != 0 || true) {
      // smallest power-of-two mask covering bound-1
      mask = bound - 1;
      mask |= mask >> 1;
      mask |= mask >> 2;
      mask |= mask >> 4;
      mask |= mask >> 8;
      mask |= mask >> 16;
      mask |= mask >> 32;
    }
    for (;;) {
      uint64_t v = gen_() & mask;
      if (v < bound) return v;
    }
  }

  // Uniform field element in [0, p).
  uint64_t field_element(uint64_t p) { return uniform(p); }

  int bit() { return static_cast<int>(gen_() & 1); }

  // Uniform real in [0, 1) with 53 bits of precision.
  double unit_real() {
    return static_cast<double>(gen_() >> 11) * (1.0 / 9007199254740992.0);
  }

  // Fisher-Yates; deterministic given the seed and container size.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Random permutation of {0, .., n-1}.
  std::vector<uint32_t> permutation(size_t n) {
    std::vector<uint32_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = static_cast<uint32_t>(i);
    shuffle(perm);
    return perm;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace kex

#pragma once

#include <cstdint>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace kex {

// Arithmetic in Z_p for a prime p < 2^62. Values are plain uint64_t in
// [0, p); the context object carries the modulus so callers can run the
// whole stack on tiny test primes.
class Field {
 public:
  static constexpr uint64_t kDefaultPrime = (uint64_t{1} << 61) - 1;

  explicit Field(uint64_t prime = kDefaultPrime) : p_(prime) {
    if (prime < 2) throw std::invalid_argument("field: modulus must be >= 2");
  }

  uint64_t prime() const { return p_; }

  uint64_t reduce(uint64_t v) const { return v % p_; }

  uint64_t add(uint64_t a, uint64_t b) const {
    uint64_t s = a + b;  // p < 2^62, no overflow
    return s >= p_ ? s - p_ : s;
  }

  uint64_t sub(uint64_t a, uint64_t b) const {
    return a >= b ? a - b : a + p_ - b;
  }

  uint64_t neg(uint64_t a) const { return a == 0 ? 0 : p_ - a; }

  uint64_t mul(uint64_t a, uint64_t b) const {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % p_);
  }

  uint64_t pow(uint64_t base, uint64_t exp) const {
    uint64_t acc = 1;
    base %= p_;
    while (exp) {
      if (exp & 1) acc = mul(acc, base);
      base = mul(base, base);
      exp >>= 1;
    }
    return acc;
  }

  // Fermat inverse; p prime by contract.
  uint64_t inv(uint64_t a) const {
    if (a == 0) throw std::domain_error("field: inverse of zero");
    return pow(a, p_ - 2);
  }

  // Signed encoding: -x maps to p - x, decode maps values above p/2 back.
  uint64_t encode(int64_t v) const {
    if (v >= 0) return static_cast<uint64_t>(v) % p_;
    uint64_t mag = static_cast<uint64_t>(-v) % p_;
    return mag == 0 ? 0 : p_ - mag;
  }

  int64_t decode(uint64_t v) const {
    if (v > p_ / 2) return -static_cast<int64_t>(p_ - v);
    return static_cast<int64_t>(v);
  }

  size_t bits() const {
    size_t b = 0;
    for (uint64_t v = p_; v; v >>= 1) ++b;
    return b;
  }

 private:
  uint64_t p_;
};

// Wire/file encoding of field elements: 8-byte little-endian.
inline void put_u64_le(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline uint64_t get_u64_le(std::span<const uint8_t> in, size_t offset) {
  if (offset + 8 > in.size()) throw std::out_of_range("get_u64_le: short buffer");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(in[offset + i]) << (8 * i);
  return v;
}

}  // namespace kex

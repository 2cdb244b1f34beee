#pragma once

#include <cstdint>
#include <utility>

#include "kex/session.hpp"

namespace kex {

// Bounded-domain comparisons. Operands are signed-encoded integers with
// absolute value below 2^value_bits; the statistical masking parameter keeps
// openings 2^-stat_bits close to uniform. Everything here is data oblivious:
// the communication pattern depends only on sizes.
struct CompareParams {
  int value_bits = 16;  // k
  int stat_bits = 40;   // s

  void validate(const Field& f) const;
};

struct MaskedOpen {
  uint64_t c = 0;  // (value + r_low) mod 2^m, public
  SVec bits;       // shares of the m mask bits, LSB first
};

// Opens value + r_low + 2^m r_high and reduces mod 2^m. value must be a
// nonnegative integer below 2^(m+1) for downstream bit tricks to hold.
MaskedOpen masked_open(Session& s, SVal value, int m, const CompareParams& cp);

// Balanced product of all terms; ceil(log2 n) rounds, n-1 multiplications.
SVal product_tree(Session& s, SVec terms);

// Shared [c < r] where c is public and r is given by its m shared bits.
SVal bits_less_public(Session& s, uint64_t c, std::span<const SVal> r_bits);

SVal eqz(Session& s, SVal z, const CompareParams& cp);  // [z == 0], |z| < 2^(k+1)
SVal ltz(Session& s, SVal z, const CompareParams& cp);  // [z < 0],  |z| < 2^(k+1)

SVal eq(Session& s, SVal x, SVal y, const CompareParams& cp);
SVal neq(Session& s, SVal x, SVal y, const CompareParams& cp);
SVal lt(Session& s, SVal x, SVal y, const CompareParams& cp);

// cond ? a : b with cond in {0,1}; one multiplication.
SVal select(Session& s, SVal cond, SVal a, SVal b);

// a OR b for bit-valued shares; one multiplication.
SVal bit_or(Session& s, SVal a, SVal b);

}  // namespace kex

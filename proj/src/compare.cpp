#include "kex/compare.hpp"

#include "kex/errors.hpp"

namespace kex {

void CompareParams::validate(const Field& f) const {
  if (value_bits < 1 || stat_bits < 1) throw ConfigError("compare: bad parameters");
  // worst case opened value: 2^(k+2) + 2^(k+2) + 2^(k+2+s) must stay below p
  if (value_bits + 3 + stat_bits >= f.bits())
    throw ConfigError("compare: value_bits + stat_bits too large for the field");
}

MaskedOpen masked_open(Session& s, SVal value, int m, const CompareParams& cp) {
  cp.validate(s.field());
  auto bits = s.random_bits(size_t(m) + size_t(cp.stat_bits));

  SVal mask = value;
  uint64_t pow = 1;
  for (int i = 0; i < m; ++i, pow <<= 1) mask = s.add(mask, s.mul_public(bits[size_t(i)], pow));
  for (int j = 0; j < cp.stat_bits; ++j, pow <<= 1)
    mask = s.add(mask, s.mul_public(bits[size_t(m) + size_t(j)], pow));

  uint64_t c = s.reveal(mask);
  MaskedOpen out;
  out.c = c & ((uint64_t(1) << m) - 1);
  out.bits.assign(bits.begin(), bits.begin() + m);
  return out;
}

SVal product_tree(Session& s, SVec terms) {
  if (terms.empty()) return s.constant(1);
  while (terms.size() > 1) {
    size_t pairs = terms.size() / 2;
    SVec lhs(pairs), rhs(pairs);
    for (size_t i = 0; i < pairs; ++i) {
      lhs[i] = terms[2 * i];
      rhs[i] = terms[2 * i + 1];
    }
    auto prod = s.mul(lhs, rhs);
    SVec next = std::move(prod);
    if (terms.size() % 2 == 1) next.push_back(terms.back());
    terms = std::move(next);
  }
  return terms[0];
}

SVal bits_less_public(Session& s, uint64_t c, std::span<const SVal> r_bits) {
  size_t m = r_bits.size();
  if (m == 0) return s.constant(0);

  // d_i = c_i xor r_i, affine in the shared bit
  SVec diff(m);
  for (size_t i = 0; i < m; ++i) {
    if ((c >> i) & 1)
      diff[i] = s.sub(s.constant(1), r_bits[i]);
    else
      diff[i] = r_bits[i];
  }

  // running OR from the most significant bit down, doubling steps
  SVec pref(m);
  for (size_t i = 0; i < m; ++i) pref[i] = diff[m - 1 - i];  // pref[0] = MSB
  for (size_t shift = 1; shift < m; shift <<= 1) {
    size_t cnt = m - shift;
    SVec a(cnt), b(cnt);
    for (size_t i = 0; i < cnt; ++i) {
      a[i] = pref[shift + i];
      b[i] = pref[i];
    }
    auto ab = s.mul(a, b);
    for (size_t i = 0; i < cnt; ++i)
      pref[shift + i] = s.sub(s.add(a[i], b[i]), ab[i]);
  }

  // indicator of the most significant differing position, then pick r there:
  // r > c iff r's bit is set where they first differ
  SVec marker(m), rsel(m);
  for (size_t pos = 0; pos < m; ++pos) {
    SVal at = pref[m - 1 - pos];
    SVal above = (pos + 1 < m) ? pref[m - 1 - (pos + 1)] : s.constant(0);
    marker[pos] = s.sub(at, above);
    rsel[pos] = r_bits[pos];
  }
  auto picked = s.mul(marker, rsel);
  SVal res = s.constant(0);
  for (size_t i = 0; i < m; ++i) res = s.add(res, picked[i]);
  return res;
}

SVal eqz(Session& s, SVal z, const CompareParams& cp) {
  int b = cp.value_bits + 1;
  int m = b + 1;
  uint64_t two_b = uint64_t(1) << b;
  uint64_t mod_mask = (uint64_t(1) << m) - 1;

  SVal a = s.add_public(z, two_b);
  auto open = masked_open(s, a, m, cp);
  uint64_t w = (open.c - two_b) & mod_mask;

  // z == 0 iff the mask bits spell w exactly
  SVec terms(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    if ((w >> i) & 1)
      terms[size_t(i)] = open.bits[size_t(i)];
    else
      terms[size_t(i)] = s.sub(s.constant(1), open.bits[size_t(i)]);
  }
  return product_tree(s, std::move(terms));
}

SVal ltz(Session& s, SVal z, const CompareParams& cp) {
  int b = cp.value_bits + 1;
  int m = b;
  uint64_t two_b = uint64_t(1) << b;

  // a = z + 2^b is positive; z < 0 iff a's bit b is clear
  SVal a = s.add_public(z, two_b);
  auto open = masked_open(s, a, m, cp);

  // a mod 2^b = c - r_low + 2^b * [c < r_low]
  SVal wrap = bits_less_public(s, open.c, open.bits);
  SVal r_low = s.constant(0);
  uint64_t pow = 1;
  for (int i = 0; i < m; ++i, pow <<= 1)
    r_low = s.add(r_low, s.mul_public(open.bits[size_t(i)], pow));
  SVal a_mod = s.add(s.sub(s.constant(open.c), r_low), s.mul_public(wrap, two_b));

  // q = (a - a mod 2^b) / 2^b is exactly a's bit b
  SVal q = s.mul_public(s.sub(a, a_mod), s.field().inv(two_b));
  return s.sub(s.constant(1), q);
}

SVal eq(Session& s, SVal x, SVal y, const CompareParams& cp) {
  return eqz(s, s.sub(x, y), cp);
}

SVal neq(Session& s, SVal x, SVal y, const CompareParams& cp) {
  return s.sub(s.constant(1), eq(s, x, y, cp));
}

SVal lt(Session& s, SVal x, SVal y, const CompareParams& cp) {
  return ltz(s, s.sub(x, y), cp);
}

SVal select(Session& s, SVal cond, SVal a, SVal b) {
  return s.add(b, s.mul(cond, s.sub(a, b)));
}

SVal bit_or(Session& s, SVal a, SVal b) {
  return s.sub(s.add(a, b), s.mul(a, b));
}

}  // namespace kex

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <vector>

#include "kex/field.hpp"
#include "kex/prg.hpp"
#include "kex/shamir.hpp"

using namespace kex;

TEST_CASE("field arithmetic basics") {
  Field f(Field::kDefaultPrime);
  uint64_t p = f.prime();
  CHECK(p == 2305843009213693951ull);
  CHECK(f.add(p - 1, 1) == 0);
  CHECK(f.sub(0, 1) == p - 1);
  CHECK(f.mul(p - 1, p - 1) == 1);
  CHECK(f.pow(3, p - 1) == 1);  // Fermat
  CHECK(f.mul(f.inv(12345), 12345) == 1);
  CHECK_THROWS_AS((void)f.inv(0), std::domain_error);
  CHECK_THROWS_AS(Field(1), std::invalid_argument);
}

TEST_CASE("field inverse against extended-euclid oracle, small prime") {
  // independent oracle: brute-force inverse in Z_101
  Field f(101);
  for (uint64_t x = 1; x < 101; ++x) {
    uint64_t inv = 0;
    for (uint64_t y = 1; y < 101; ++y)
      if ((x * y) % 101 == 1) { inv = y; break; }
    CHECK(f.inv(x) == inv);
  }
}

TEST_CASE("signed encoding round trip") {
  Field f(Field::kDefaultPrime);
  for (int64_t v : {int64_t(0), int64_t(1), int64_t(-1), int64_t(42), int64_t(-42),
                    int64_t(1) << 40, -(int64_t(1) << 40)}) {
    CHECK(f.decode(f.encode(v)) == v);
  }
  CHECK(f.encode(-1) == f.prime() - 1);
}

TEST_CASE("little endian serialization round trip") {
  std::vector<uint8_t> buf;
  put_u64_le(buf, 0x0123456789abcdefull);
  CHECK(buf.size() == 8);
  CHECK(buf[0] == 0xef);
  CHECK(buf[7] == 0x01);
  CHECK(get_u64_le(buf, 0) == 0x0123456789abcdefull);
}

TEST_CASE("worked sharing example, p=101 t=1 n=3") {
  // f(X) = 42 + 7X over Z_101: shares are (1,49), (2,56), (3,63)
  SharingParams params{1, 3, 101};
  std::array<uint64_t, 1> coeffs{7};
  auto shares = share_with_coeffs(42, coeffs, params);
  REQUIRE(shares.size() == 3);
  CHECK(shares[0].value == 49);
  CHECK(shares[1].value == 56);
  CHECK(shares[2].value == 63);

  std::array<Share, 2> two{shares[0], shares[1]};
  CHECK(reconstruct(two, params) == 42);
  std::array<Share, 2> other{shares[1], shares[2]};
  CHECK(reconstruct(other, params) == 42);
  std::array<Share, 3> all{shares[0], shares[1], shares[2]};
  CHECK(reconstruct(all, params) == 42);
}

TEST_CASE("lagrange coefficients at zero for points 1,2,3") {
  Field f(Field::kDefaultPrime);
  std::array<int, 3> pts{1, 2, 3};
  auto lambda = lagrange_at_zero(f, pts);
  CHECK(lambda[0] == 3);
  CHECK(lambda[1] == f.encode(-3));
  CHECK(lambda[2] == 1);
}

TEST_CASE("share/reconstruct round trip, default params") {
  SharingParams params;
  Prg prg(0xC0FFEE);
  Field f(params.prime);
  for (int i = 0; i < 10000; ++i) {
    uint64_t secret = prg.field_element(params.prime);
    auto shares = share_secret(secret, params, prg);
    CHECK(reconstruct(shares, params) == secret);
  }
}

TEST_CASE("reconstruct validates its inputs") {
  SharingParams params;
  Prg prg(7);
  auto shares = share_secret(99, params, prg);

  std::array<Share, 1> one{shares[0]};
  CHECK_THROWS_AS((void)reconstruct(one, params), ProtocolError);

  std::array<Share, 2> dup{shares[0], shares[0]};
  CHECK_THROWS_AS((void)reconstruct(dup, params), ProtocolError);

  std::array<Share, 2> bad_idx{Share{0, 5}, shares[1]};
  CHECK_THROWS_AS((void)reconstruct(bad_idx, params), ProtocolError);

  // tampered third share breaks polynomial consistency
  auto tampered = shares;
  tampered[2].value = Field(params.prime).add(tampered[2].value, 1);
  CHECK_THROWS_AS((void)reconstruct(tampered, params), ProtocolError);
}

TEST_CASE("sharing params validation") {
  CHECK_THROWS_AS((SharingParams{0, 3}.validate()), ConfigError);
  CHECK_THROWS_AS((SharingParams{3, 3}.validate()), ConfigError);
  CHECK_THROWS_AS((SharingParams{1, 3, 3}.validate()), ConfigError);
  CHECK_THROWS_AS((SharingParams{1, 2}.validate_for_multiplication()), ConfigError);
  CHECK_NOTHROW((SharingParams{1, 3}.validate_for_multiplication()));
}

TEST_CASE("local linear combination matches plaintext") {
  SharingParams params;
  Field f(params.prime);
  Prg prg(0xBEEF);
  for (int rep = 0; rep < 200; ++rep) {
    uint64_t a = prg.field_element(params.prime);
    uint64_t b = prg.field_element(params.prime);
    uint64_t ca = prg.field_element(params.prime);
    uint64_t cb = prg.field_element(params.prime);
    uint64_t k = prg.field_element(params.prime);
    auto sa = share_secret(a, params, prg);
    auto sb = share_secret(b, params, prg);
    std::vector<Share> combined;
    for (int i = 0; i < params.num_peers; ++i) {
      std::array<uint64_t, 2> coeffs{ca, cb};
      std::array<Share, 2> row{sa[i], sb[i]};
      combined.push_back(local_linear(coeffs, row, k, params));
    }
    uint64_t expect = f.add(f.add(f.mul(ca, a), f.mul(cb, b)), k);
    CHECK(reconstruct(combined, params) == expect);
  }
}

TEST_CASE("local linear rejects mixed party indices") {
  SharingParams params;
  Prg prg(3);
  auto sa = share_secret(1, params, prg);
  std::array<uint64_t, 2> coeffs{1, 1};
  std::array<Share, 2> mixed{sa[0], sa[1]};
  CHECK_THROWS_AS((void)local_linear(coeffs, mixed, 0, params), ProtocolError);
}

TEST_CASE("share distribution is uniform, chi-square over Z_101") {
  // Each share of a fixed secret is marginally uniform when the coefficient
  // is uniform. 1e5 samples into 101 cells; chi-square threshold is the
  // 0.99 quantile for 100 degrees of freedom.
  constexpr int kCells = 101;
  constexpr int kSamples = 100000;
  constexpr double kThreshold = 135.807;

  SharingParams params{1, 3, kCells};
  Prg prg(0xA11CE);
  std::array<int, kCells> counts{};
  for (int i = 0; i < kSamples; ++i) {
    auto shares = share_secret(42, params, prg);
    counts[shares[1].value]++;  // party 2's share
  }
  double expected = double(kSamples) / kCells;
  double chi2 = 0;
  for (int c : counts) {
    double d = c - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < kThreshold);
}

TEST_CASE("prg uniform sampling is in range and deterministic") {
  Prg a(123), b(123);
  for (int i = 0; i < 1000; ++i) {
    uint64_t bound = 1 + (i * 7919) % 1000;
    uint64_t va = a.uniform(bound);
    CHECK(va < bound);
    CHECK(va == b.uniform(bound));
  }
  Prg c(123);
  auto perm = c.permutation(16);
  std::vector<uint32_t> sorted(perm.begin(), perm.end());
  std::sort(sorted.begin(), sorted.end());
  for (uint32_t i = 0; i < 16; ++i) CHECK(sorted[i] == i);
}

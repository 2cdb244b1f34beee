#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kex/compare.hpp"
#include "kex/local_runner.hpp"

using namespace kex;

namespace {
const CompareParams kCp{};

// all parties agree on revealed outputs in these tests, so checking party 0
// plus cross-party equality keeps assertions readable
template <typename F>
auto run3(uint64_t seed, F&& body) {
  SharingParams params;
  auto run = run_local_parties(params, {}, seed, std::forward<F>(body));
  for (size_t p = 1; p < run.per_party.size(); ++p)
    REQUIRE(run.per_party[p] == run.per_party[0]);
  return run.per_party[0];
}
}  // namespace

TEST_CASE("eqz and ltz, exhaustive near zero plus domain extremes") {
  std::vector<int64_t> zs;
  for (int64_t z = -65; z <= 65; ++z) zs.push_back(z);
  int64_t lim = (int64_t(1) << (kCp.value_bits + 1)) - 1;
  for (int64_t z : {lim, -lim, lim - 1, -(lim - 1), int64_t(12345), int64_t(-54321)})
    zs.push_back(z);

  auto opened = run3(101, [&](Session& s) {
    std::vector<uint64_t> out;
    for (int64_t z : zs) {
      SVal zv = s.constant_signed(z);
      out.push_back(s.reveal(eqz(s, zv, kCp)));
      out.push_back(s.reveal(ltz(s, zv, kCp)));
    }
    return out;
  });

  for (size_t i = 0; i < zs.size(); ++i) {
    CAPTURE(zs[i]);
    CHECK(opened[2 * i] == (zs[i] == 0 ? 1 : 0));
    CHECK(opened[2 * i + 1] == (zs[i] < 0 ? 1 : 0));
  }
}

TEST_CASE("pairwise comparisons match plaintext on random k-bit operands") {
  Prg rng(2024);
  std::vector<std::pair<uint64_t, uint64_t>> pairs;
  for (int i = 0; i < 60; ++i) {
    uint64_t bound = uint64_t(1) << kCp.value_bits;
    pairs.emplace_back(rng.uniform(bound), rng.uniform(bound));
  }
  pairs.emplace_back(0, 0);
  pairs.emplace_back(65535, 65535);
  pairs.emplace_back(0, 65535);
  pairs.emplace_back(65535, 0);

  auto opened = run3(202, [&](Session& s) {
    std::vector<uint64_t> out;
    for (auto [x, y] : pairs) {
      SVal xv = s.constant(x), yv = s.constant(y);
      out.push_back(s.reveal(lt(s, xv, yv, kCp)));
      out.push_back(s.reveal(eq(s, xv, yv, kCp)));
      out.push_back(s.reveal(neq(s, xv, yv, kCp)));
    }
    return out;
  });

  for (size_t i = 0; i < pairs.size(); ++i) {
    auto [x, y] = pairs[i];
    CAPTURE(x);
    CAPTURE(y);
    CHECK(opened[3 * i] == (x < y ? 1 : 0));
    CHECK(opened[3 * i + 1] == (x == y ? 1 : 0));
    CHECK(opened[3 * i + 2] == (x != y ? 1 : 0));
  }
}

TEST_CASE("comparisons work on genuinely shared values") {
  // same oracle but through dealer shares instead of public constants
  SharingParams params;
  Prg dealer(7);
  Field f(params.prime);
  std::vector<std::pair<int64_t, int64_t>> pairs{{3, 9}, {9, 3}, {4, 4}, {0, 1}, {1, 0}};
  std::vector<std::vector<uint64_t>> raw_x(3), raw_y(3);
  for (auto [x, y] : pairs) {
    auto sx = share_secret(f.encode(x), params, dealer);
    auto sy = share_secret(f.encode(y), params, dealer);
    for (int p = 0; p < 3; ++p) {
      raw_x[size_t(p)].push_back(sx[size_t(p)].value);
      raw_y[size_t(p)].push_back(sy[size_t(p)].value);
    }
  }
  auto run = run_local_parties(params, {}, 303, [&](Session& s) {
    std::vector<uint64_t> out;
    for (size_t i = 0; i < pairs.size(); ++i) {
      SVal x = s.load_share(raw_x[size_t(s.self() - 1)][i]);
      SVal y = s.load_share(raw_y[size_t(s.self() - 1)][i]);
      out.push_back(s.reveal(lt(s, x, y, kCp)));
      out.push_back(s.reveal(eq(s, x, y, kCp)));
    }
    return out;
  });
  for (size_t i = 0; i < pairs.size(); ++i) {
    auto [x, y] = pairs[i];
    CHECK(run.per_party[0][2 * i] == (x < y ? 1 : 0));
    CHECK(run.per_party[0][2 * i + 1] == (x == y ? 1 : 0));
  }
}

TEST_CASE("bits_less_public exhaustive over 4-bit values") {
  auto opened = run3(404, [&](Session& s) {
    std::vector<uint64_t> out;
    for (uint64_t c = 0; c < 16; ++c)
      for (uint64_t r = 0; r < 16; ++r) {
        SVec rb(4);
        for (int i = 0; i < 4; ++i) rb[size_t(i)] = s.constant((r >> i) & 1);
        out.push_back(s.reveal(bits_less_public(s, c, rb)));
      }
    return out;
  });
  size_t pos = 0;
  for (uint64_t c = 0; c < 16; ++c)
    for (uint64_t r = 0; r < 16; ++r) {
      CAPTURE(c);
      CAPTURE(r);
      CHECK(opened[pos++] == (c < r ? 1 : 0));
    }
}

TEST_CASE("masked open is consistent with its mask bits") {
  constexpr int kM = 10;
  auto opened = run3(505, [&](Session& s) {
    std::vector<uint64_t> out;
    for (uint64_t v : {uint64_t(0), uint64_t(1), uint64_t(777), uint64_t(1023)}) {
      auto mo = masked_open(s, s.constant(v), kM, kCp);
      uint64_t r_low = 0;
      auto bits = s.reveal(std::span<const SVal>(mo.bits));
      for (int i = 0; i < kM; ++i) r_low |= bits[size_t(i)] << i;
      out.push_back(mo.c);
      out.push_back(r_low);
      out.push_back(v);
    }
    return out;
  });
  for (size_t i = 0; i < opened.size(); i += 3) {
    uint64_t c = opened[i], r_low = opened[i + 1], v = opened[i + 2];
    CHECK(c == ((v + r_low) & ((1u << kM) - 1)));
  }
}

TEST_CASE("product tree multiplies everything") {
  auto opened = run3(606, [&](Session& s) {
    std::vector<uint64_t> out;
    for (size_t n : {size_t(1), size_t(2), size_t(3), size_t(7), size_t(8)}) {
      SVec terms;
      uint64_t expect = 1;
      for (size_t i = 0; i < n; ++i) {
        terms.push_back(s.constant(i + 2));
        expect *= i + 2;
      }
      out.push_back(s.reveal(product_tree(s, std::move(terms))));
      out.push_back(expect);
    }
    return out;
  });
  for (size_t i = 0; i < opened.size(); i += 2) CHECK(opened[i] == opened[i + 1]);
}

TEST_CASE("select and bit_or truth tables") {
  auto opened = run3(707, [&](Session& s) {
    std::vector<uint64_t> out;
    out.push_back(s.reveal(select(s, s.constant(1), s.constant(11), s.constant(22))));
    out.push_back(s.reveal(select(s, s.constant(0), s.constant(11), s.constant(22))));
    for (int a = 0; a <= 1; ++a)
      for (int b = 0; b <= 1; ++b)
        out.push_back(s.reveal(bit_or(s, s.constant(uint64_t(a)), s.constant(uint64_t(b)))));
    return out;
  });
  CHECK(opened[0] == 11);
  CHECK(opened[1] == 22);
  CHECK(opened[2] == 0);
  CHECK(opened[3] == 1);
  CHECK(opened[4] == 1);
  CHECK(opened[5] == 1);
}

TEST_CASE("compare params reject oversized domains") {
  Field f(Field::kDefaultPrime);
  CHECK_THROWS_AS((CompareParams{30, 40}.validate(f)), ConfigError);
  CHECK_NOTHROW(CompareParams{16, 40}.validate(f));
}

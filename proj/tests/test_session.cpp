#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <numeric>

#include "kex/local_runner.hpp"
#include "kex/session.hpp"

using namespace kex;

namespace {

// Dealer-style: share plaintexts outside the protocol, hand raw shares to
// each party. Mirrors how the in-process matcher seeds inputs.
struct Dealt {
  std::vector<std::vector<uint64_t>> raw;  // [party][element]
};

Dealt deal(std::span<const uint64_t> values, const SharingParams& params, Prg& prg) {
  Dealt d;
  d.raw.assign(size_t(params.num_peers), {});
  for (uint64_t v : values) {
    auto shares = share_secret(v, params, prg);
    for (int p = 0; p < params.num_peers; ++p) d.raw[size_t(p)].push_back(shares[size_t(p)].value);
  }
  return d;
}

}  // namespace

TEST_CASE("batched multiplication matches field oracle") {
  SharingParams params;
  Field f(params.prime);
  Prg rng(0x5EED);
  constexpr size_t kCount = 1000;
  std::vector<uint64_t> xs(kCount), ys(kCount);
  for (size_t i = 0; i < kCount; ++i) {
    xs[i] = rng.field_element(params.prime);
    ys[i] = rng.field_element(params.prime);
  }
  Prg dealer(1);
  auto dx = deal(xs, params, dealer);
  auto dy = deal(ys, params, dealer);

  auto run = run_local_parties(params, {}, 42, [&](Session& s) {
    std::vector<SVal> a, b;
    for (uint64_t r : dx.raw[size_t(s.self() - 1)]) a.push_back(s.load_share(r));
    for (uint64_t r : dy.raw[size_t(s.self() - 1)]) b.push_back(s.load_share(r));
    auto z = s.mul(a, b);
    return s.reveal(std::span<const SVal>(z));
  });

  for (size_t i = 0; i < kCount; ++i) {
    uint64_t expect = f.mul(xs[i], ys[i]);
    for (int p = 0; p < 3; ++p) CHECK(run.per_party[size_t(p)][i] == expect);
  }
}

TEST_CASE("one mul call is one round regardless of batch size") {
  SharingParams params;
  auto run = run_local_parties(params, {}, 7, [&](Session& s) {
    std::vector<SVal> a(500, s.constant(3)), b(500, s.constant(5));
    auto before = s.stats();
    auto z = s.mul(a, b);
    auto after = s.stats();
    (void)z;
    return std::pair{after.rounds - before.rounds,
                     after.multiplications - before.multiplications};
  });
  for (auto& [r, m] : run.per_party) {
    CHECK(r == 1);
    CHECK(m == 500);
  }
}

TEST_CASE("degree comes back to t after multiplication") {
  // with t=1 any two shares determine the secret; all three pairs must agree,
  // which fails for the raw degree-2 local product
  SharingParams params;
  Prg dealer(9);
  std::array<uint64_t, 1> xs{1234567}, ys{7654321};
  auto dx = deal(xs, params, dealer);
  auto dy = deal(ys, params, dealer);

  auto run = run_local_parties(params, {}, 3, [&](Session& s) {
    SVal a = s.load_share(dx.raw[size_t(s.self() - 1)][0]);
    SVal b = s.load_share(dy.raw[size_t(s.self() - 1)][0]);
    return s.mul(a, b).v;
  });

  Field f(params.prime);
  uint64_t expect = f.mul(1234567, 7654321);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      std::array<Share, 2> pair{Share{i + 1, run.per_party[size_t(i)]},
                                Share{j + 1, run.per_party[size_t(j)]}};
      CHECK(reconstruct(pair, params) == expect);
    }
  }
}

TEST_CASE("input_from distributes shares of the owner's values") {
  SharingParams params;
  std::vector<uint64_t> secrets{5, 0, 99999};
  auto run = run_local_parties(params, {}, 11, [&](Session& s) {
    std::span<const uint64_t> mine =
        s.self() == 2 ? std::span<const uint64_t>(secrets) : std::span<const uint64_t>();
    auto got = s.input_from(2, mine, secrets.size());
    return s.reveal(std::span<const SVal>(got));
  });
  for (auto& opened : run.per_party) {
    REQUIRE(opened.size() == secrets.size());
    for (size_t i = 0; i < secrets.size(); ++i) CHECK(opened[i] == secrets[i]);
  }
}

TEST_CASE("reveal handles signed encodings") {
  SharingParams params;
  auto run = run_local_parties(params, {}, 13, [&](Session& s) {
    SVal a = s.constant_signed(-17);
    SVal b = s.constant(20);
    return s.field().decode(s.reveal(s.add(a, b)));
  });
  for (auto v : run.per_party) CHECK(v == 3);
}

TEST_CASE("random bits are bits and roughly balanced") {
  SharingParams params;
  constexpr size_t kBits = 2000;
  auto run = run_local_parties(params, {}, 17, [&](Session& s) {
    auto bits = s.random_bits(kBits);
    return s.reveal(std::span<const SVal>(bits));
  });
  size_t ones = 0;
  for (size_t i = 0; i < kBits; ++i) {
    uint64_t v = run.per_party[0][i];
    CHECK((v == 0 || v == 1));
    CHECK(run.per_party[1][i] == v);
    CHECK(run.per_party[2][i] == v);
    ones += v;
  }
  CHECK(ones > kBits * 2 / 5);
  CHECK(ones < kBits * 3 / 5);
}

TEST_CASE("bit pool refills in bulk") {
  SharingParams params;
  auto run = run_local_parties(params, {}, 19, [&](Session& s) {
    auto r0 = s.stats().rounds;
    (void)s.random_bits(10);
    auto r1 = s.stats().rounds;
    (void)s.random_bits(100);  // served from the same chunk
    auto r2 = s.stats().rounds;
    return std::pair{r1 - r0, r2 - r1};
  });
  for (auto& [fill, cached] : run.per_party) {
    CHECK(fill == 3);  // one input round plus two xor-fold muls
    CHECK(cached == 0);
  }
}

TEST_CASE("trace stats are identical across parties and runs") {
  SharingParams params;
  auto job = [&](Session& s) {
    std::vector<SVal> a(64, s.constant(2)), b(64, s.constant(3));
    auto z = s.mul(a, b);
    (void)s.reveal(std::span<const SVal>(z));
    (void)s.random_bits(32);
    return s.stats();
  };
  auto r1 = run_local_parties(params, {}, 23, job);
  auto r2 = run_local_parties(params, {}, 24, job);  // different seed, same sizes
  CHECK(r1.stats[0] == r1.stats[1]);
  CHECK(r1.stats[1] == r1.stats[2]);
  CHECK(r1.stats[0] == r2.stats[0]);
  CHECK(r1.stats[0].rounds > 0);
  CHECK(r1.stats[0].bytes_sent > 0);
}

TEST_CASE("virtual clock reflects latency and is reproducible") {
  SharingParams params;
  auto job = [&](Session& s) {
    SVal x = s.constant(1);
    for (int i = 0; i < 10; ++i) x = s.mul(x, x);
    return s.stats().rounds;
  };

  auto unshaped = run_local_parties(params, {}, 31, job);
  CHECK(unshaped.virtual_s == 0.0);

  NetProfile lan{1.0, 1000.0};
  auto shaped1 = run_local_parties(params, lan, 31, job);
  auto shaped2 = run_local_parties(params, lan, 31, job);
  CHECK(shaped1.virtual_s == shaped2.virtual_s);  // bitwise deterministic
  // 10 sequential rounds at 1ms each, plus sub-ms serialization
  CHECK(shaped1.virtual_s > 0.009);
  CHECK(shaped1.virtual_s < 0.02);

  NetProfile slow{5.0, 1000.0};
  auto shaped5 = run_local_parties(params, slow, 31, job);
  CHECK(shaped5.virtual_s > shaped1.virtual_s * 4);
}

TEST_CASE("a failing party does not hang the others") {
  SharingParams params;
  CHECK_THROWS_AS(run_local_parties(params, {}, 37,
                                    [&](Session& s) -> uint64_t {
                                      if (s.self() == 2)
                                        throw ProtocolError("injected failure");
                                      return s.reveal(s.constant(1));
                                    }),
                  ProtocolError);
}

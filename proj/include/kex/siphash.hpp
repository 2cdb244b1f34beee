#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>

namespace kex {

// SipHash-2-4, reference parameters. Used to authenticate transport frames
// under a pre-shared passphrase; not a general-purpose hash.
inline uint64_t siphash24(std::span<const uint8_t> data, const std::array<uint8_t, 16>& key) {
  auto rotl = [](uint64_t x, int b) { return (x << b) | (x >> (64 - b)); };
  auto load64 = [](const uint8_t* p) {
    uint64_t v;
    std::memcpy(&v, p, 8);
    return v;  // little-endian hosts only; asserted in the build for x86/arm
  };

  uint64_t k0 = load64(key.data());
  uint64_t k1 = load64(key.data() + 8);
  uint64_t v0 = 0x736f6d6570736575ull ^ k0;
  uint64_t v1 = 0x646f72616e646f6dull ^ k1;
  uint64_t v2 = 0x6c7967656e657261ull ^ k0;
  uint64_t v3 = 0x7465646279746573ull ^ k1;

  auto round = [&] {
    v0 += v1;
    v1 = rotl(v1, 13);
    v1 ^= v0;
    v0 = rotl(v0, 32);
    v2 += v3;
    v3 = rotl(v3, 16);
    v3 ^= v2;
    v0 += v3;
    v3 = rotl(v3, 21);
    v3 ^= v0;
    v2 += v1;
    v1 = rotl(v1, 17);
    v1 ^= v2;
    v2 = rotl(v2, 32);
  };

  size_t n = data.size();
  const uint8_t* p = data.data();
  size_t blocks = n / 8;
  for (size_t i = 0; i < blocks; ++i, p += 8) {
    uint64_t m = load64(p);
    v3 ^= m;
    round();
    round();
    v0 ^= m;
  }

  uint64_t last = uint64_t(n & 0xff) << 56;
  for (size_t i = 0; i < (n & 7); ++i) last |= uint64_t(p[i]) << (8 * i);
  v3 ^= last;
  round();
  round();
  v0 ^= last;

  v2 ^= 0xff;
  round();
  round();
  round();
  round();
  return v0 ^ v1 ^ v2 ^ v3;
}

// Stretches a passphrase into a 16-byte MAC key.
inline std::array<uint8_t, 16> mac_key_from_passphrase(std::string_view psk) {
  std::array<uint8_t, 16> seed_a{}, seed_b{};
  seed_a.fill(0xa5);
  seed_b.fill(0x5a);
  std::span<const uint8_t> bytes(reinterpret_cast<const uint8_t*>(psk.data()), psk.size());
  uint64_t h0 = siphash24(bytes, seed_a);
  uint64_t h1 = siphash24(bytes, seed_b);
  std::array<uint8_t, 16> key{};
  std::memcpy(key.data(), &h0, 8);
  std::memcpy(key.data() + 8, &h1, 8);
  return key;
}

}  // namespace kex

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kex/errors.hpp"
#include "kex/field.hpp"
#include "kex/prg.hpp"

namespace kex {

// (t, n) threshold sharing over Z_p. Evaluation points are the party
// indices 1..n; reconstruction needs any t+1 shares with distinct indices.
struct SharingParams {
  int threshold = 1;
  int num_peers = 3;
  uint64_t prime = Field::kDefaultPrime;

  void validate() const {
    if (threshold < 1 || threshold >= num_peers)
      throw ConfigError("sharing: need 0 < t < n");
    if (prime <= static_cast<uint64_t>(num_peers))
      throw ConfigError("sharing: prime must exceed peer count");
  }

  // Multiplication by local product + resharing needs 2t+1 honest paths.
  void validate_for_multiplication() const {
    validate();
    if (num_peers < 2 * threshold + 1)
      throw ConfigError("sharing: multiplication needs n >= 2t+1");
  }
};

// A share carries its evaluation point so reconstruction never depends on
// positional convention.
struct Share {
  int party_index = 0;  // 1..n
  uint64_t value = 0;
};

// Horner evaluation of x + c1*X + ... + ct*X^t at point.
inline uint64_t eval_share_poly(const Field& f, uint64_t secret,
                                std::span<const uint64_t> coeffs, uint64_t point) {
  uint64_t acc = 0;
  for (size_t i = coeffs.size(); i > 0; --i) acc = f.mul(f.add(acc, coeffs[i - 1]), point);
  return f.add(acc, secret);
}

// Deterministic variant used by tests and by the engine (coefficients come
// from an explicit randomness source).
inline std::vector<Share> share_with_coeffs(uint64_t secret,
                                            std::span<const uint64_t> coeffs,
                                            const SharingParams& params) {
  params.validate();
  Field f(params.prime);
  if (coeffs.size() != static_cast<size_t>(params.threshold))
    throw ConfigError("sharing: need exactly t coefficients");
  std::vector<Share> shares;
  shares.reserve(params.num_peers);
  for (int i = 1; i <= params.num_peers; ++i)
    shares.push_back({i, eval_share_poly(f, secret, coeffs, static_cast<uint64_t>(i))});
  return shares;
}

inline std::vector<Share> share_secret(uint64_t secret, const SharingParams& params,
                                       Prg& prg) {
  params.validate();
  std::vector<uint64_t> coeffs(static_cast<size_t>(params.threshold));
  for (auto& c : coeffs) c = prg.field_element(params.prime);
  return share_with_coeffs(secret, coeffs, params);
}

// Lagrange coefficients for interpolating at zero from the given points.
inline std::vector<uint64_t> lagrange_at_zero(const Field& f,
                                              std::span<const int> points) {
  std::vector<uint64_t> lambda(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    uint64_t num = 1, den = 1;
    uint64_t xi = static_cast<uint64_t>(points[i]);
    for (size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      uint64_t xj = static_cast<uint64_t>(points[j]);
      num = f.mul(num, xj);
      den = f.mul(den, f.sub(xj, xi));
    }
    lambda[i] = f.mul(num, f.inv(den));
  }
  return lambda;
}

// Interpolation at zero. With more than t+1 shares the extra points are
// checked against the interpolated polynomial and inconsistency is an error.
inline uint64_t reconstruct(std::span<const Share> shares, const SharingParams& params) {
  params.validate();
  Field f(params.prime);
  size_t need = static_cast<size_t>(params.threshold) + 1;
  if (shares.size() < need) throw ProtocolError("reconstruct: not enough shares");
  for (size_t i = 0; i < shares.size(); ++i) {
    if (shares[i].party_index < 1 || shares[i].party_index > params.num_peers)
      throw ProtocolError("reconstruct: party index out of range");
    for (size_t j = i + 1; j < shares.size(); ++j)
      if (shares[i].party_index == shares[j].party_index)
        throw ProtocolError("reconstruct: duplicate party index");
  }

  std::vector<int> pts(need);
  for (size_t i = 0; i < need; ++i) pts[i] = shares[i].party_index;
  auto lambda = lagrange_at_zero(f, pts);
  uint64_t secret = 0;
  for (size_t i = 0; i < need; ++i) secret = f.add(secret, f.mul(lambda[i], shares[i].value));

  if (shares.size() > need) {
    // consistency: every extra share must lie on the degree-<=t polynomial
    // through the first t+1 points
    for (size_t k = need; k < shares.size(); ++k) {
      uint64_t at = static_cast<uint64_t>(shares[k].party_index);
      uint64_t predicted = 0;
      for (size_t i = 0; i < need; ++i) {
        uint64_t num = 1, den = 1;
        uint64_t xi = static_cast<uint64_t>(pts[i]);
        for (size_t j = 0; j < need; ++j) {
          if (j == i) continue;
          uint64_t xj = static_cast<uint64_t>(pts[j]);
          num = f.mul(num, f.sub(at, xj));
          den = f.mul(den, f.sub(xi, xj));
        }
        predicted = f.add(predicted, f.mul(shares[i].value, f.mul(num, f.inv(den))));
      }
      if (predicted != shares[k].value)
        throw ProtocolError("reconstruct: shares are not consistent with one polynomial");
    }
  }
  return secret;
}

// Pointwise linear combination over one party's shares. Reconstructing the
// per-party results yields the same combination of the underlying secrets.
inline Share local_linear(std::span<const uint64_t> coeffs, std::span<const Share> shares,
                          uint64_t constant, const SharingParams& params) {
  params.validate();
  Field f(params.prime);
  if (coeffs.size() != shares.size())
    throw ConfigError("local_linear: coefficient/share count mismatch");
  if (shares.empty()) return {0, f.reduce(constant)};
  int idx = shares[0].party_index;
  uint64_t acc = f.reduce(constant);
  for (size_t i = 0; i < shares.size(); ++i) {
    if (shares[i].party_index != idx)
      throw ProtocolError("local_linear: mixed party indices");
    acc = f.add(acc, f.mul(f.reduce(coeffs[i]), shares[i].value));
  }
  return {idx, acc};
}

}  // namespace kex

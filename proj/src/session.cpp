#include "kex/session.hpp"

#include <algorithm>

#include "kex/errors.hpp"

namespace kex {

Session::Session(SharingParams params, std::shared_ptr<Transport> transport,
                 uint16_t session_id, uint64_t prg_seed)
    : params_(params),
      field_(params.prime),
      transport_(std::move(transport)),
      session_id_(session_id),
      prg_(prg_seed) {
  params_.validate_for_multiplication();
  if (transport_->num_peers() != params_.num_peers)
    throw ConfigError("session: transport peer count does not match sharing params");
  std::vector<int> pts(params_.num_peers);
  for (int i = 0; i < params_.num_peers; ++i) pts[i] = i + 1;
  lambda_ = lagrange_at_zero(field_, pts);
}

std::vector<std::vector<uint64_t>> Session::exchange(
    const std::vector<std::vector<uint64_t>>& outgoing, MsgKind kind) {
  int n = params_.num_peers;
  int me = self();
  uint32_t round = static_cast<uint32_t>(stats_.rounds);
  FrameHeader h{session_id_, round, static_cast<uint8_t>(me), kind};
  for (int j = 1; j <= n; ++j) {
    if (j == me) continue;
    auto frame = encode_frame(h, outgoing[size_t(j)]);
    stats_.bytes_sent += frame.size();
    transport_->send(j, std::move(frame));
  }
  std::vector<std::vector<uint64_t>> got(size_t(n) + 1);
  got[size_t(me)] = outgoing[size_t(me)];
  for (int j = 1; j <= n; ++j) {
    if (j == me) continue;
    auto frame = transport_->recv(j);
    auto rh = decode_frame_header(frame);
    if (rh.session_id != session_id_ || rh.round != round || rh.sender != j ||
        rh.kind != kind)
      throw ProtocolError("exchange: parties out of lockstep");
    got[size_t(j)] = decode_frame_payload(frame);
  }
  stats_.rounds += 1;
  return got;
}

std::vector<SVal> Session::input_from(int owner, std::span<const uint64_t> values,
                                      size_t count) {
  int n = params_.num_peers;
  int me = self();
  if (owner < 1 || owner > n) throw ProtocolError("input_from: bad owner");
  uint32_t round = static_cast<uint32_t>(stats_.rounds);
  std::vector<SVal> out(count);
  if (me == owner) {
    if (values.size() != count) throw ProtocolError("input_from: value count mismatch");
    std::vector<std::vector<uint64_t>> per_peer(size_t(n) + 1,
                                                std::vector<uint64_t>(count));
    std::vector<uint64_t> coeffs(size_t(params_.threshold));
    for (size_t e = 0; e < count; ++e) {
      for (auto& c : coeffs) c = prg_.field_element(params_.prime);
      uint64_t secret = field_.reduce(values[e]);
      for (int j = 1; j <= n; ++j)
        per_peer[size_t(j)][e] = eval_share_poly(field_, secret, coeffs, uint64_t(j));
    }
    FrameHeader h{session_id_, round, static_cast<uint8_t>(me), MsgKind::kShares};
    for (int j = 1; j <= n; ++j) {
      if (j == me) continue;
      auto frame = encode_frame(h, per_peer[size_t(j)]);
      stats_.bytes_sent += frame.size();
      transport_->send(j, std::move(frame));
    }
    for (size_t e = 0; e < count; ++e) out[e] = {per_peer[size_t(me)][e]};
  } else {
    auto frame = transport_->recv(owner);
    auto rh = decode_frame_header(frame);
    if (rh.session_id != session_id_ || rh.round != round || rh.sender != owner ||
        rh.kind != MsgKind::kShares)
      throw ProtocolError("input_from: parties out of lockstep");
    auto payload = decode_frame_payload(frame);
    if (payload.size() != count) throw ProtocolError("input_from: bad payload size");
    for (size_t e = 0; e < count; ++e) out[e] = {payload[e]};
  }
  stats_.rounds += 1;
  return out;
}

std::vector<uint64_t> Session::reveal(std::span<const SVal> xs) {
  int n = params_.num_peers;
  std::vector<uint64_t> mine(xs.size());
  for (size_t e = 0; e < xs.size(); ++e) mine[e] = xs[e].v;
  std::vector<std::vector<uint64_t>> outgoing(size_t(n) + 1, mine);
  auto got = exchange(outgoing, MsgKind::kShares);

  std::vector<Share> pts(static_cast<size_t>(n));
  std::vector<uint64_t> out(xs.size());
  SharingParams p = params_;
  for (size_t e = 0; e < xs.size(); ++e) {
    for (int j = 1; j <= n; ++j) {
      if (got[size_t(j)].size() != xs.size())
        throw ProtocolError("reveal: bad payload size");
      pts[size_t(j - 1)] = {j, got[size_t(j)][e]};
    }
    out[e] = reconstruct(pts, p);
  }
  return out;
}

uint64_t Session::reveal(SVal x) {
  std::array<SVal, 1> xs{x};
  return reveal(std::span<const SVal>(xs))[0];
}

std::vector<SVal> Session::mul(std::span<const SVal> xs, std::span<const SVal> ys) {
  if (xs.size() != ys.size()) throw ProtocolError("mul: operand size mismatch");
  if (xs.empty()) return {};
  int n = params_.num_peers;

  // local product lifts the degree to 2t; a fresh resharing of each local
  // product recombined with the Lagrange weights brings it back to t
  std::vector<std::vector<uint64_t>> per_peer(size_t(n) + 1,
                                              std::vector<uint64_t>(xs.size()));
  std::vector<uint64_t> coeffs(size_t(params_.threshold));
  for (size_t e = 0; e < xs.size(); ++e) {
    uint64_t d = field_.mul(xs[e].v, ys[e].v);
    for (auto& c : coeffs) c = prg_.field_element(params_.prime);
    for (int j = 1; j <= n; ++j)
      per_peer[size_t(j)][e] = eval_share_poly(field_, d, coeffs, uint64_t(j));
  }
  auto got = exchange(per_peer, MsgKind::kShares);

  std::vector<SVal> out(xs.size());
  for (size_t e = 0; e < xs.size(); ++e) {
    uint64_t acc = 0;
    for (int j = 1; j <= n; ++j) {
      if (got[size_t(j)].size() != xs.size()) throw ProtocolError("mul: bad payload size");
      acc = field_.add(acc, field_.mul(lambda_[size_t(j - 1)], got[size_t(j)][e]));
    }
    out[e] = {acc};
  }
  stats_.multiplications += xs.size();
  return out;
}

SVal Session::mul(SVal a, SVal b) {
  std::array<SVal, 1> xs{a}, ys{b};
  return mul(std::span<const SVal>(xs), std::span<const SVal>(ys))[0];
}

void Session::fill_bit_pool(size_t at_least) {
  size_t have = bit_pool_.size() - bit_pool_pos_;
  if (have >= at_least) return;
  size_t want = std::max(at_least - have, kBitPoolChunk);

  int n = params_.num_peers;
  // every party contributes one locally sampled bit per slot, shared in a
  // single collective input round
  std::vector<uint64_t> mine(want);
  for (auto& b : mine) b = prg_.bit();
  std::vector<std::vector<uint64_t>> per_peer(size_t(n) + 1, std::vector<uint64_t>(want));
  std::vector<uint64_t> coeffs(size_t(params_.threshold));
  std::vector<std::vector<uint64_t>> my_contrib(size_t(n) + 1);
  for (size_t e = 0; e < want; ++e) {
    for (auto& c : coeffs) c = prg_.field_element(params_.prime);
    for (int j = 1; j <= n; ++j)
      per_peer[size_t(j)][e] = eval_share_poly(field_, mine[e], coeffs, uint64_t(j));
  }
  auto got = exchange(per_peer, MsgKind::kShares);

  // XOR-fold: b ^ b' = b + b' - 2bb', one multiplication batch per peer added
  std::vector<SVal> acc(want);
  for (size_t e = 0; e < want; ++e) {
    if (got[1].size() != want) throw ProtocolError("bit pool: bad payload size");
    acc[e] = {got[1][e]};
  }
  for (int k = 2; k <= n; ++k) {
    if (got[size_t(k)].size() != want) throw ProtocolError("bit pool: bad payload size");
    std::vector<SVal> other(want);
    for (size_t e = 0; e < want; ++e) other[e] = {got[size_t(k)][e]};
    auto prod = mul(acc, other);
    for (size_t e = 0; e < want; ++e)
      acc[e] = sub(add(acc[e], other[e]), mul_public(prod[e], 2));
  }

  // compact the consumed prefix, then append
  bit_pool_.erase(bit_pool_.begin(), bit_pool_.begin() + long(bit_pool_pos_));
  bit_pool_pos_ = 0;
  bit_pool_.insert(bit_pool_.end(), acc.begin(), acc.end());
}

std::vector<SVal> Session::random_bits(size_t count) {
  fill_bit_pool(count);
  std::vector<SVal> out(bit_pool_.begin() + long(bit_pool_pos_),
                        bit_pool_.begin() + long(bit_pool_pos_ + count));
  bit_pool_pos_ += count;
  return out;
}

SVal Session::random_bit() { return random_bits(1)[0]; }

void Session::prefetch_bits(size_t count) { fill_bit_pool(count); }

}  // namespace kex

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "kex/field.hpp"
#include "kex/prg.hpp"
#include "kex/shamir.hpp"
#include "kex/transport.hpp"
#include "kex/wire.hpp"

namespace kex {

// One party's share of a secret value. The party index is implicit in the
// session; wrapping the raw element keeps shares from mixing with plaintext.
struct SVal {
  uint64_t v = 0;
};

using SVec = std::vector<SVal>;

struct TraceStats {
  uint64_t rounds = 0;           // collective exchanges
  uint64_t multiplications = 0;  // multiplication protocol invocations
  uint64_t bytes_sent = 0;       // framed bytes this party put on the wire

  bool operator==(const TraceStats&) const = default;
};

// SPMD view of one protocol party. All parties run the same call sequence;
// every interactive primitive is a collective step and counts one round.
class Session {
 public:
  Session(SharingParams params, std::shared_ptr<Transport> transport, uint16_t session_id,
          uint64_t prg_seed);

  int self() const { return transport_->self(); }
  const SharingParams& params() const { return params_; }
  const Field& field() const { return field_; }
  TraceStats& stats() { return stats_; }
  const TraceStats& stats() const { return stats_; }
  Transport& transport() { return *transport_; }
  Prg& prg() { return prg_; }

  // local share arithmetic
  SVal constant(uint64_t v) const { return {field_.reduce(v)}; }
  SVal constant_signed(int64_t v) const { return {field_.encode(v)}; }
  SVal load_share(uint64_t raw) const { return {field_.reduce(raw)}; }
  SVal add(SVal a, SVal b) const { return {field_.add(a.v, b.v)}; }
  SVal sub(SVal a, SVal b) const { return {field_.sub(a.v, b.v)}; }
  SVal neg(SVal a) const { return {field_.neg(a.v)}; }
  SVal add_public(SVal a, uint64_t c) const { return {field_.add(a.v, field_.reduce(c))}; }
  SVal mul_public(SVal a, uint64_t c) const { return {field_.mul(a.v, field_.reduce(c))}; }

  // One party contributes `count` secrets, everyone obtains shares. Only the
  // owner reads `values`. One round.
  std::vector<SVal> input_from(int owner, std::span<const uint64_t> values, size_t count);

  // Open values to all parties. One round per call, any batch size.
  uint64_t reveal(SVal x);
  std::vector<uint64_t> reveal(std::span<const SVal> xs);

  // Pointwise products via local multiply plus degree reduction. One round
  // per call, any batch size.
  std::vector<SVal> mul(std::span<const SVal> xs, std::span<const SVal> ys);
  SVal mul(SVal a, SVal b);

  // Shared uniform bits nobody knows, from XOR-combining one locally sampled
  // bit per party. Served from a pool that refills in bulk.
  std::vector<SVal> random_bits(size_t count);
  SVal random_bit();
  void prefetch_bits(size_t count);

 private:
  // Sends outgoing[j] to party j for every j != self, receives one frame from
  // each. Returns payloads indexed by party (1-based, slot 0 unused); the own
  // slot holds outgoing[self]. Counts one round.
  std::vector<std::vector<uint64_t>> exchange(const std::vector<std::vector<uint64_t>>& outgoing,
                                              MsgKind kind);
  void fill_bit_pool(size_t at_least);

  SharingParams params_;
  Field field_;
  std::shared_ptr<Transport> transport_;
  uint16_t session_id_;
  Prg prg_;
  TraceStats stats_;
  std::vector<uint64_t> lambda_;  // Lagrange coefficients at 0 for points 1..n
  std::vector<SVal> bit_pool_;
  size_t bit_pool_pos_ = 0;
};

constexpr size_t kBitPoolChunk = 4096;

}  // namespace kex

#pragma once

#include <cstdint>
#include <string>

#include "kex/protocol.hpp"

namespace kex {

// One grid point of the protocol benchmark. The measured window starts after
// every computing peer holds all input shares and ends when the output shares
// are ready to hand back; input dealing is excluded.
struct BenchConfig {
  std::string transport = "local";  // local (shaped virtual clock) | tcp (loopback sockets)
  int num_pairs = 4;
  int latency_ms = 1;
  double bandwidth_mbps = 1000.0;
  int reps = 0;  // 0 = auto: ten when the first rep stays under an hour, else one
  uint64_t seed = 1;
  int num_antigens = 50;
  double abort_hours = 168.0;  // give up past the measurement cutoff
  CrossoverOptions options;
  std::string passphrase;  // tcp frame authentication, empty = off
  int base_port = 29300;   // tcp loopback port block

  void validate() const;
};

struct BenchResult {
  std::string transport;
  int num_pairs = 0;
  int latency_ms = 0;
  double bandwidth_mbps = 0.0;
  int reps = 0;
  double wall_runtime_s = 0.0;  // local: virtual shaped clock; tcp: real wall
  uint64_t total_bytes = 0;     // sum over computing peers
  uint64_t rounds = 0;
  uint64_t multiplications = 0;
};

// trace fields must agree across repetitions and peers; disagreement is a
// protocol error, not something to average away
BenchResult run_bench(const BenchConfig& cfg);

std::string bench_csv_header();
std::string bench_csv_row(const BenchResult& r);

}  // namespace kex

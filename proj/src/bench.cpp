#include "kex/bench.hpp"

#include <chrono>
#include <future>
#include <iomanip>
#include <sstream>
#include <vector>

#include "kex/compat.hpp"
#include "kex/errors.hpp"
#include "kex/local_runner.hpp"
#include "kex/transport_tcp.hpp"

namespace kex {

namespace {

struct RepMeasure {
  double wall_s = 0.0;
  TraceStats delta;  // per-peer trace over the measured window (equal by design)
  uint64_t bytes_total = 0;
};

// dealt by party 1; the trace of the measured window is input-independent
std::vector<uint64_t> flat_pool(const BenchConfig& cfg, uint64_t rep_seed) {
  GeneratorConfig gen;
  gen.num_antigens = cfg.num_antigens;
  Prg prg(rep_seed);
  auto pool = random_pool(static_cast<size_t>(cfg.num_pairs), gen, prg);
  std::vector<uint64_t> flat;
  flat.reserve(pool.size() * record_elements(cfg.num_antigens));
  for (const auto& rec : pool) {
    auto elems = encode_record(rec);
    flat.insert(flat.end(), elems.begin(), elems.end());
  }
  return flat;
}

// share inputs, run the protocol inside the measurement window, then verify
// the revealed matching is an involution before reporting
RepMeasure measure_party(Session& s, const BenchConfig& cfg,
                         std::span<const uint64_t> flat, bool real_clock) {
  size_t stride = record_elements(cfg.num_antigens);
  auto all = s.input_from(1, flat, stride * static_cast<size_t>(cfg.num_pairs));
  std::vector<SharedPairRecord> records;
  records.reserve(static_cast<size_t>(cfg.num_pairs));
  for (int i = 0; i < cfg.num_pairs; ++i) {
    records.push_back(split_record_shares(
        std::span<const SVal>(all).subspan(static_cast<size_t>(i) * stride, stride),
        cfg.num_antigens));
  }

  TraceStats before = s.stats();
  double v0 = s.transport().virtual_elapsed_s();
  auto t0 = std::chrono::steady_clock::now();
  auto result = run_crossover_ke(s, records, cfg.options);
  auto t1 = std::chrono::steady_clock::now();
  double v1 = s.transport().virtual_elapsed_s();

  RepMeasure m;
  m.wall_s = real_clock ? std::chrono::duration<double>(t1 - t0).count() : v1 - v0;
  m.delta.rounds = s.stats().rounds - before.rounds;
  m.delta.multiplications = s.stats().multiplications - before.multiplications;
  m.delta.bytes_sent = s.stats().bytes_sent - before.bytes_sent;

  auto mate = s.reveal(result.partner);
  for (size_t u = 0; u < mate.size(); ++u) {
    uint64_t w = mate[u];
    if (w == 0) continue;
    if (w > mate.size() || mate[w - 1] != u + 1)
      throw ProtocolError("bench: revealed matching is not an involution");
  }
  return m;
}

RepMeasure combine(std::vector<RepMeasure> per_party) {
  RepMeasure out = per_party.at(0);
  out.bytes_total = 0;
  for (const auto& m : per_party) {
    if (m.delta.rounds != out.delta.rounds ||
        m.delta.multiplications != out.delta.multiplications)
      throw ProtocolError("bench: trace differs between peers");
    out.wall_s = std::max(out.wall_s, m.wall_s);
    out.bytes_total += m.delta.bytes_sent;
  }
  return out;
}

RepMeasure one_rep_local(const BenchConfig& cfg, uint64_t rep_seed) {
  SharingParams params;
  NetProfile profile{static_cast<double>(cfg.latency_ms), cfg.bandwidth_mbps};
  auto flat = flat_pool(cfg, rep_seed);
  auto run = run_local_parties(params, profile, rep_seed, [&](Session& s) {
    return measure_party(s, cfg, flat, false);
  });
  return combine(std::move(run.per_party));
}

RepMeasure one_rep_tcp(const BenchConfig& cfg, uint64_t rep_seed) {
  SharingParams params;
  NetProfile profile{static_cast<double>(cfg.latency_ms), cfg.bandwidth_mbps};
  auto flat = flat_pool(cfg, rep_seed);
  std::vector<std::string> endpoints;
  for (int p = 1; p <= params.num_peers; ++p)
    endpoints.push_back("127.0.0.1:" + std::to_string(cfg.base_port + p));

  auto party = [&](int p) {
    TcpPeerConfig pc;
    pc.self = p;
    pc.endpoints = endpoints;
    pc.profile = profile;
    pc.passphrase = cfg.passphrase;
    auto mesh = tcp_mesh_connect(pc);
    Session s(params, mesh, 1, party_seed(rep_seed, p));
    auto m = measure_party(s, cfg, flat, true);
    mesh->close();
    return m;
  };

  std::vector<std::future<RepMeasure>> futs;
  for (int p = 1; p <= params.num_peers; ++p)
    futs.push_back(std::async(std::launch::async, party, p));
  std::vector<RepMeasure> per_party;
  per_party.reserve(futs.size());
  for (auto& f : futs) per_party.push_back(f.get());
  return combine(std::move(per_party));
}

}  // namespace

void BenchConfig::validate() const {
  if (transport != "local" && transport != "tcp")
    throw ConfigError("bench: transport must be local or tcp");
  if (num_pairs < 1) throw ConfigError("bench: need at least one pair");
  if (latency_ms < 0) throw ConfigError("bench: negative latency");
  if (bandwidth_mbps <= 0.0) throw ConfigError("bench: bandwidth must be positive");
  if (reps < 0) throw ConfigError("bench: negative repetition count");
  if (num_antigens < 1) throw ConfigError("bench: need at least one antigen");
  if (abort_hours <= 0.0) throw ConfigError("bench: abort window must be positive");
  if (transport == "tcp" && (base_port < 1024 || base_port > 65000))
    throw ConfigError("bench: tcp base port out of range");
  options.cmp.validate(Field(SharingParams{}.prime));
}

BenchResult run_bench(const BenchConfig& cfg) {
  cfg.validate();
  auto one_rep = [&](uint64_t rep_seed) {
    return cfg.transport == "local" ? one_rep_local(cfg, rep_seed)
                                    : one_rep_tcp(cfg, rep_seed);
  };

  RepMeasure first = one_rep(party_seed(cfg.seed, 1000));
  if (first.wall_s > cfg.abort_hours * 3600.0)
    throw InfeasibleSizeError("bench: run exceeded the measurement cutoff");
  int reps = cfg.reps != 0 ? cfg.reps : (first.wall_s < 3600.0 ? 10 : 1);

  double wall_sum = first.wall_s;
  for (int r = 1; r < reps; ++r) {
    RepMeasure m = one_rep(party_seed(cfg.seed, 1000 + static_cast<uint64_t>(r)));
    if (m.delta.rounds != first.delta.rounds ||
        m.delta.multiplications != first.delta.multiplications ||
        m.bytes_total != first.bytes_total)
      throw ProtocolError("bench: trace differs between repetitions");
    wall_sum += m.wall_s;
  }

  BenchResult res;
  res.transport = cfg.transport;
  res.num_pairs = cfg.num_pairs;
  res.latency_ms = cfg.latency_ms;
  res.bandwidth_mbps = cfg.bandwidth_mbps;
  res.reps = reps;
  res.wall_runtime_s = wall_sum / reps;
  res.total_bytes = first.bytes_total;
  res.rounds = first.delta.rounds;
  res.multiplications = first.delta.multiplications;
  return res;
}

std::string bench_csv_header() {
  return "transport,num_pairs,latency_ms,bandwidth_mbps,reps,wall_runtime_s,"
         "total_bytes,rounds,multiplications\n";
}

std::string bench_csv_row(const BenchResult& r) {
  std::ostringstream out;
  out << r.transport << ',' << r.num_pairs << ',' << r.latency_ms << ','
      << std::setprecision(6) << r.bandwidth_mbps << ',' << r.reps << ','
      << std::fixed << std::setprecision(6) << r.wall_runtime_s << ','
      << r.total_bytes << ',' << r.rounds << ',' << r.multiplications << '\n';
  return out.str();
}

}  // namespace kex

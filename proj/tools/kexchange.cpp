#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kex/bench.hpp"
#include "kex/dyn_sim.hpp"
#include "kex/errors.hpp"
#include "kex/local_runner.hpp"
#include "kex/protocol.hpp"
#include "kex/record_io.hpp"
#include "kex/runtime_model.hpp"
#include "kex/transport_tcp.hpp"
#include "kex/wire.hpp"

using namespace kex;

namespace {

// ---- raw socket plumbing for the submission port ----

constexpr uint32_t kMaxSubmitBody = 1u << 22;

void write_all_fd(int fd, const uint8_t* data, size_t len) {
  size_t off = 0;
  while (off < len) {
    ssize_t n = ::send(fd, data + off, len - off, MSG_NOSIGNAL);
    if (n <= 0) throw TransportError("submit: connection write failed");
    off += static_cast<size_t>(n);
  }
}

void read_exact_fd(int fd, uint8_t* data, size_t len) {
  size_t off = 0;
  while (off < len) {
    ssize_t n = ::recv(fd, data + off, len - off, 0);
    if (n <= 0) throw TransportError("submit: connection closed mid-frame");
    off += static_cast<size_t>(n);
  }
}

std::vector<uint8_t> recv_frame_fd(int fd) {
  uint8_t prefix[kLengthPrefixBytes];
  read_exact_fd(fd, prefix, sizeof prefix);
  uint32_t len = uint32_t(prefix[0]) | uint32_t(prefix[1]) << 8 |
                 uint32_t(prefix[2]) << 16 | uint32_t(prefix[3]) << 24;
  if (len < kFrameHeaderBytes || len > kMaxSubmitBody)
    throw TransportError("submit: bad frame length");
  std::vector<uint8_t> frame(kLengthPrefixBytes + len);
  std::memcpy(frame.data(), prefix, sizeof prefix);
  read_exact_fd(fd, frame.data() + kLengthPrefixBytes, len);
  return frame;
}

struct HostPort {
  std::string host;
  int port = 0;
};

HostPort split_endpoint(const std::string& ep) {
  auto colon = ep.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == ep.size())
    throw ConfigError("endpoint must look like host:port, got '" + ep + "'");
  HostPort hp;
  hp.host = ep.substr(0, colon);
  try {
    hp.port = std::stoi(ep.substr(colon + 1));
  } catch (const std::exception&) {
    throw ConfigError("bad port in endpoint '" + ep + "'");
  }
  if (hp.port < 1 || hp.port > 65535) throw ConfigError("port out of range in '" + ep + "'");
  return hp;
}

int dial(const HostPort& hp, int timeout_ms) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (getaddrinfo(hp.host.c_str(), std::to_string(hp.port).c_str(), &hints, &res) != 0)
    throw TransportError("cannot resolve " + hp.host);
  auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  for (;;) {
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
      int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
        int one = 1;
        setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        freeaddrinfo(res);
        return fd;
      }
      ::close(fd);
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      freeaddrinfo(res);
      throw TransportError("cannot connect to " + hp.host + ":" +
                           std::to_string(hp.port));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

int listen_on(int port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw TransportError("submit: cannot create listener");
  int one = 1;
  setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(static_cast<uint16_t>(port));
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
      ::listen(fd, 64) != 0) {
    ::close(fd);
    throw TransportError("submit: cannot listen on port " + std::to_string(port));
  }
  return fd;
}

int accept_within(int listener, std::chrono::steady_clock::time_point deadline) {
  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw TransportError("submit: timed out waiting for inputs");
    pollfd pfd{listener, POLLIN, 0};
    int rc = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 500)));
    if (rc < 0) throw TransportError("submit: poll failed");
    if (rc == 0) continue;
    int fd = ::accept(listener, nullptr, nullptr);
    if (fd >= 0) return fd;
  }
}

// ---- shared protocol config (public sizes every participant agrees on) ----

struct ProtocolConfig {
  int num_pairs = 0;
  int num_antigens = 50;
  CrossoverOptions options;
};

void apply_protocol_json(const nlohmann::json& doc, ProtocolConfig& pc) {
  for (const auto& [key, value] : doc.items()) {
    if (key == "num_pairs") pc.num_pairs = value.get<int>();
    else if (key == "num_antigens") pc.num_antigens = value.get<int>();
    else if (key == "shuffle_contributors") pc.options.shuffle_contributors = value.get<int>();
    else if (key == "value_bits") pc.options.cmp.value_bits = value.get<int>();
    else if (key == "stat_bits") pc.options.cmp.stat_bits = value.get<int>();
    else throw ConfigError("config: unknown key '" + key + "'");
  }
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  try {
    nlohmann::json doc;
    in >> doc;
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: bad json in " + path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

uint64_t fresh_seed() {
  std::random_device rd;
  return (uint64_t(rd()) << 32) ^ rd();
}

// ---- subcommands ----

struct PeerArgs {
  int peer_id = 0;
  std::string mesh;  // comma-separated computing peer endpoints
  int submit_port = 0;
  std::string config_path;
  std::string passphrase;
  uint64_t seed = 0;
  bool seeded = false;
  int timeout_s = 120;
};

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_peer(const PeerArgs& args) {
  ProtocolConfig pc;
  apply_protocol_json(load_json(args.config_path), pc);
  if (pc.num_pairs < 1) throw ConfigError("peer: config must set num_pairs >= 1");
  if (pc.num_antigens < 1) throw ConfigError("peer: config must set num_antigens >= 1");

  TcpPeerConfig mesh_cfg;
  mesh_cfg.self = args.peer_id;
  mesh_cfg.endpoints = split_list(args.mesh);
  mesh_cfg.passphrase = args.passphrase;
  mesh_cfg.connect_timeout_ms = args.timeout_s * 1000;
  auto mesh = tcp_mesh_connect(mesh_cfg);

  size_t stride = record_elements(pc.num_antigens);
  int listener = listen_on(args.submit_port);
  auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(args.timeout_s);
  std::map<uint32_t, std::pair<int, std::vector<uint64_t>>> submissions;  // pair -> fd, shares
  try {
    while (submissions.size() < static_cast<size_t>(pc.num_pairs)) {
      int fd = accept_within(listener, deadline);
      auto frame = recv_frame_fd(fd);
      auto header = decode_frame_header(frame);
      auto payload = decode_frame_payload(frame);
      if (header.kind != MsgKind::kSubmit)
        throw TransportError("peer: expected a submission frame");
      if (header.round < 1 || header.round > static_cast<uint32_t>(pc.num_pairs))
        throw TransportError("peer: pair id out of range");
      if (payload.size() != stride)
        throw TransportError("peer: submission has wrong element count");
      if (!submissions.emplace(header.round, std::make_pair(fd, std::move(payload))).second)
        throw TransportError("peer: duplicate submission for pair " +
                             std::to_string(header.round));
    }
  } catch (...) {
    for (auto& [pair, entry] : submissions) ::close(entry.first);
    ::close(listener);
    throw;
  }
  ::close(listener);

  SharingParams params;
  uint64_t seed = args.seeded ? args.seed : fresh_seed();
  Session session(params, mesh, 1, party_seed(seed, args.peer_id));
  std::vector<SharedPairRecord> records;
  records.reserve(static_cast<size_t>(pc.num_pairs));
  for (uint32_t pair = 1; pair <= static_cast<uint32_t>(pc.num_pairs); ++pair) {
    SVec elems;
    elems.reserve(stride);
    for (uint64_t raw : submissions.at(pair).second)
      elems.push_back(session.load_share(raw));
    records.push_back(split_record_shares(elems, pc.num_antigens));
  }

  auto result = run_crossover_ke(session, records, pc.options);

  for (uint32_t pair = 1; pair <= static_cast<uint32_t>(pc.num_pairs); ++pair) {
    int fd = submissions.at(pair).first;
    FrameHeader h;
    h.session_id = 1;
    h.round = pair;
    h.sender = static_cast<uint8_t>(args.peer_id);
    h.kind = MsgKind::kResult;
    uint64_t share = result.partner[pair - 1].v;
    auto frame = encode_frame(h, std::span<const uint64_t>(&share, 1));
    write_all_fd(fd, frame.data(), frame.size());
    ::close(fd);
  }
  mesh->close();
  std::cout << "peer " << args.peer_id << ": served " << pc.num_pairs << " pairs, "
            << session.stats().rounds << " rounds\n";
  return 0;
}

struct MatchArgs {
  std::string records_path;
  std::string config_path;
  std::string connect;  // empty = in-process
  std::string out;
  uint64_t seed = 1;
  int timeout_s = 120;
};

std::string assignments_text(const std::vector<uint64_t>& mate) {
  // involution sanity before anything is written
  for (size_t u = 0; u < mate.size(); ++u) {
    uint64_t w = mate[u];
    if (w > mate.size()) throw ProtocolError("match: partner label out of range");
    if (w != 0 && mate[w - 1] != u + 1)
      throw ProtocolError("match: result is not a matching");
  }
  std::ostringstream out;
  for (size_t u = 0; u < mate.size(); ++u) out << (u + 1) << ',' << mate[u] << '\n';
  return out.str();
}

std::vector<uint64_t> match_local(const std::vector<PairRecord>& pool,
                                  const ProtocolConfig& pc, uint64_t seed) {
  std::vector<uint64_t> flat;
  size_t stride = record_elements(pc.num_antigens);
  for (const auto& rec : pool) {
    auto elems = encode_record(rec);
    flat.insert(flat.end(), elems.begin(), elems.end());
  }
  SharingParams params;
  auto run = run_local_parties(params, NetProfile{}, seed, [&](Session& s) {
    auto all = s.input_from(1, flat, stride * pool.size());
    std::vector<SharedPairRecord> records;
    for (size_t i = 0; i < pool.size(); ++i) {
      records.push_back(split_record_shares(
          std::span<const SVal>(all).subspan(i * stride, stride), pc.num_antigens));
    }
    return run_crossover_ke(s, records, pc.options).partner;
  });
  SharingParams check;
  std::vector<uint64_t> mate(pool.size());
  for (size_t u = 0; u < pool.size(); ++u) {
    std::vector<Share> shares;
    for (int p = 1; p <= params.num_peers; ++p)
      shares.push_back({p, run.per_party[size_t(p - 1)][u].v});
    mate[u] = reconstruct(shares, check);
  }
  return mate;
}

std::vector<uint64_t> match_remote(const std::vector<PairRecord>& pool,
                                   const ProtocolConfig& pc, const MatchArgs& args) {
  auto endpoints = split_list(args.connect);
  SharingParams params;
  if (endpoints.size() != static_cast<size_t>(params.num_peers))
    throw ConfigError("match: need exactly " + std::to_string(params.num_peers) +
                      " peer endpoints");
  size_t stride = record_elements(pc.num_antigens);
  Prg prg(args.seed);

  // one connection per (pair, peer); the result comes back on the same socket
  std::vector<std::vector<int>> fds(pool.size(),
                                    std::vector<int>(endpoints.size(), -1));
  auto close_all = [&] {
    for (auto& row : fds)
      for (int fd : row)
        if (fd >= 0) ::close(fd);
  };
  try {
    for (size_t u = 0; u < pool.size(); ++u) {
      auto elems = encode_record(pool[u]);
      if (elems.size() != stride)
        throw ConfigError("match: records disagree with num_antigens in the config");
      std::vector<std::vector<uint64_t>> per_peer(endpoints.size());
      for (uint64_t value : elems) {
        auto shares = share_secret(value, params, prg);
        for (size_t p = 0; p < endpoints.size(); ++p)
          per_peer[p].push_back(shares[p].value);
      }
      for (size_t p = 0; p < endpoints.size(); ++p) {
        fds[u][p] = dial(split_endpoint(endpoints[p]), args.timeout_s * 1000);
        FrameHeader h;
        h.session_id = 1;
        h.round = static_cast<uint32_t>(u + 1);
        h.sender = 0;
        h.kind = MsgKind::kSubmit;
        auto frame = encode_frame(h, per_peer[p]);
        write_all_fd(fds[u][p], frame.data(), frame.size());
      }
    }

    std::vector<uint64_t> mate(pool.size());
    for (size_t u = 0; u < pool.size(); ++u) {
      std::vector<Share> shares;
      for (size_t p = 0; p < endpoints.size(); ++p) {
        auto frame = recv_frame_fd(fds[u][p]);
        auto header = decode_frame_header(frame);
        auto payload = decode_frame_payload(frame);
        if (header.kind != MsgKind::kResult || header.round != u + 1 ||
            payload.size() != 1)
          throw TransportError("match: unexpected result frame");
        shares.push_back({static_cast<int>(p) + 1, payload[0]});
      }
      mate[u] = reconstruct(shares, params);
    }
    close_all();
    return mate;
  } catch (...) {
    close_all();
    throw;
  }
}

int cmd_match(const MatchArgs& args) {
  auto pool = load_records(args.records_path);
  if (pool.empty()) throw ConfigError("match: no records in " + args.records_path);
  ProtocolConfig pc;
  pc.num_pairs = static_cast<int>(pool.size());
  pc.num_antigens = static_cast<int>(pool.front().patient_antibodies.size());
  if (!args.config_path.empty()) {
    apply_protocol_json(load_json(args.config_path), pc);
    if (pc.num_pairs != static_cast<int>(pool.size()))
      throw ConfigError("match: config num_pairs disagrees with the records file");
    if (pc.num_antigens != static_cast<int>(pool.front().patient_antibodies.size()))
      throw ConfigError("match: config num_antigens disagrees with the records file");
  }
  auto mate = args.connect.empty() ? match_local(pool, pc, args.seed)
                                   : match_remote(pool, pc, args);
  write_text(args.out, assignments_text(mate));
  return 0;
}

struct OracleArgs {
  std::string in;
  std::string out;
  bool verify_maximum = false;
};

int cmd_oracle(const OracleArgs& args) {
  std::ifstream in(args.in);
  if (!in) throw ConfigError("oracle: cannot open " + args.in);
  std::ostringstream buf;
  buf << in.rdbuf();
  Graph g = graph_from_text(buf.str());
  Matching m = pape_conradt(g);
  std::ostringstream out;
  out << "matching size " << m.size() << '\n';
  for (int v = 1; v <= g.n; ++v) out << v << ',' << m.mate[size_t(v)] << '\n';
  write_text(args.out, out.str());
  if (args.verify_maximum) {
    int best = max_matching_size(g);
    if (m.size() != best) {
      std::cerr << "oracle: matching below maximum (" << m.size() << " < " << best
                << ") on " << graph_canonical(g) << '\n';
      return 1;
    }
  }
  return 0;
}

struct BenchArgs {
  std::string transport = "local";
  std::vector<int> sizes{4};
  std::vector<int> latencies{1};
  std::vector<double> bandwidths{1000.0};
  int reps = 0;
  uint64_t seed = 1;
  int antigens = 50;
  double abort_hours = 168.0;
  int base_port = 29500;
  std::string passphrase;
  std::string out;
};

int cmd_bench(const BenchArgs& args) {
  std::string csv = bench_csv_header();
  int port = args.base_port;
  for (int size : args.sizes) {
    for (int latency : args.latencies) {
      for (double bandwidth : args.bandwidths) {
        BenchConfig cfg;
        cfg.transport = args.transport;
        cfg.num_pairs = size;
        cfg.latency_ms = latency;
        cfg.bandwidth_mbps = bandwidth;
        cfg.reps = args.reps;
        cfg.seed = args.seed;
        cfg.num_antigens = args.antigens;
        cfg.abort_hours = args.abort_hours;
        cfg.passphrase = args.passphrase;
        cfg.base_port = port;
        port += 8;  // fresh loopback ports per grid point
        csv += bench_csv_row(run_bench(cfg));
      }
    }
  }
  write_text(args.out, csv);
  return 0;
}

struct SimulateArgs {
  std::string config_path;
  std::string out;          // per-run rows, skipped when empty
  std::string summary_out;  // summary table, stdout when empty
  uint64_t seed = 0;
  bool seeded = false;
};

void apply_sim_json(const nlohmann::json& doc, SimConfig& sim) {
  for (const auto& [key, value] : doc.items()) {
    if (key == "mean_stay_days") sim.mean_stay_days = value.get<int>();
    else if (key == "refusal_prob") sim.refusal_prob = value.get<double>();
    else if (key == "crossmatch_fail_sensitized")
      sim.crossmatch_fail_sensitized = value.get<double>();
    else if (key == "crossmatch_fail_other")
      sim.crossmatch_fail_other = value.get<double>();
    else if (key == "reentry_refusal_days") sim.reentry_refusal_days = value.get<int>();
    else if (key == "reentry_crossmatch_days")
      sim.reentry_crossmatch_days = value.get<int>();
    else if (key == "horizon_days") sim.horizon_days = value.get<int>();
    else if (key == "poisson_arrivals") sim.poisson_arrivals = value.get<bool>();
    else throw ConfigError("config: unknown sim key '" + key + "'");
  }
}

void apply_generator_json(const nlohmann::json& doc, GeneratorConfig& gen) {
  for (const auto& [key, value] : doc.items()) {
    if (key == "num_antigens") gen.num_antigens = value.get<int>();
    else if (key == "antigen_prob") gen.antigen_prob = value.get<double>();
    else if (key == "sensitized_prevalence")
      gen.sensitized_prevalence = value.get<double>();
    else if (key == "antibody_prob_sensitized")
      gen.antibody_prob_sensitized = value.get<double>();
    else if (key == "antibody_prob_normal")
      gen.antibody_prob_normal = value.get<double>();
    else if (key == "only_incompatible") gen.only_incompatible = value.get<bool>();
    else throw ConfigError("config: unknown generator key '" + key + "'");
  }
}

int cmd_simulate(const SimulateArgs& args) {
  SweepSpec spec;
  RuntimeModel model = RuntimeModel::defaults();
  if (!args.config_path.empty()) {
    auto doc = load_json(args.config_path);
    for (const auto& [key, value] : doc.items()) {
      if (key == "arrival_intervals") spec.arrival_intervals = value.get<std::vector<int>>();
      else if (key == "match_intervals") spec.match_intervals = value.get<std::vector<int>>();
      else if (key == "latencies") spec.latencies = value.get<std::vector<int>>();
      else if (key == "runs") spec.runs = value.get<int>();
      else if (key == "seed") spec.seed = value.get<uint64_t>();
      else if (key == "sim") apply_sim_json(value, spec.base);
      else if (key == "generator") apply_generator_json(value, spec.base.generator);
      else if (key == "calibration_file")
        model = RuntimeModel::from_json_file(value.get<std::string>());
      else throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  if (args.seeded) spec.seed = args.seed;

  auto result = compare_backends(spec, model);
  if (!args.out.empty()) write_text(args.out, sweep_rows_csv(result.rows));
  write_text(args.summary_out, sweep_summary_csv(result.cells));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"privacy-preserving kidney exchange toolkit"};
  app.require_subcommand(1);

  PeerArgs peer;
  auto* peer_cmd = app.add_subcommand("peer", "run one computing peer for one session");
  peer_cmd->add_option("--peer-id", peer.peer_id, "party index, 1..3")->required();
  peer_cmd->add_option("--mesh", peer.mesh, "computing peer endpoints h:p,h:p,h:p")
      ->required();
  peer_cmd->add_option("--submit-port", peer.submit_port, "input submission port")
      ->required();
  peer_cmd->add_option("--config", peer.config_path, "shared public config (json)")
      ->required();
  peer_cmd->add_option("--passphrase", peer.passphrase, "mesh frame authentication key");
  auto* peer_seed = peer_cmd->add_option("--seed", peer.seed, "deterministic randomness");
  peer_cmd->add_option("--timeout-s", peer.timeout_s, "mesh and submission timeout");

  MatchArgs match;
  auto* match_cmd = app.add_subcommand("match", "one-shot privacy-preserving match");
  match_cmd->add_option("--records", match.records_path, "pair records file")->required();
  match_cmd->add_option("--config", match.config_path, "shared public config (json)");
  match_cmd->add_option("--connect", match.connect,
                        "submission endpoints h:p,h:p,h:p (default: in-process peers)");
  match_cmd->add_option("--out", match.out, "assignment output file (default stdout)");
  match_cmd->add_option("--seed", match.seed, "share randomness seed");
  match_cmd->add_option("--timeout-s", match.timeout_s, "connection timeout");

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "plaintext matching on a graph file");
  oracle_cmd->add_option("--in", oracle.in, "graph file: 'n m' then edge lines")
      ->required();
  oracle_cmd->add_option("--out", oracle.out, "output file (default stdout)");
  oracle_cmd->add_flag("--verify-maximum", oracle.verify_maximum,
                       "fail when the search misses the brute-force maximum");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "protocol benchmark sweep");
  bench_cmd->add_option("--transport", bench.transport, "local | tcp");
  bench_cmd->add_option("--sizes", bench.sizes, "pool sizes");
  bench_cmd->add_option("--latencies", bench.latencies, "link latencies, ms");
  bench_cmd->add_option("--bandwidths", bench.bandwidths, "link bandwidths, mbps");
  bench_cmd->add_option("--reps", bench.reps, "repetitions, 0 = auto");
  bench_cmd->add_option("--seed", bench.seed, "input generator seed");
  bench_cmd->add_option("--antigens", bench.antigens, "antigen panel size");
  bench_cmd->add_option("--abort-hours", bench.abort_hours, "measurement cutoff");
  bench_cmd->add_option("--base-port", bench.base_port, "tcp loopback port block");
  bench_cmd->add_option("--passphrase", bench.passphrase, "tcp frame authentication");
  bench_cmd->add_option("--out", bench.out, "csv output file (default stdout)");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "dynamic platform sweep");
  sim_cmd->add_option("--config", sim.config_path, "sweep config (json)");
  sim_cmd->add_option("--out", sim.out, "per-run csv output file");
  sim_cmd->add_option("--summary-out", sim.summary_out,
                      "summary csv output file (default stdout)");
  auto* sim_seed = sim_cmd->add_option("--seed", sim.seed, "sweep seed override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  peer.seeded = peer_seed->count() > 0;
  sim.seeded = sim_seed->count() > 0;

  try {
    if (peer_cmd->parsed()) return cmd_peer(peer);
    if (match_cmd->parsed()) return cmd_match(match);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle);
    if (bench_cmd->parsed()) return cmd_bench(bench);
    if (sim_cmd->parsed()) return cmd_simulate(sim);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InfeasibleSizeError& e) {
    std::cerr << "infeasible size: " << e.what() << '\n';
    return 4;
  } catch (const TransportError& e) {
    std::cerr << "transport error: " << e.what() << '\n';
    return 3;
  } catch (const ProtocolError& e) {
    std::cerr << "protocol error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

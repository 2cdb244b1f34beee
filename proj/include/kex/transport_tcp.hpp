#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kex/transport.hpp"

namespace kex {

struct TcpPeerConfig {
  int self = 1;
  std::vector<std::string> endpoints;  // "host:port" per party, entry 0 = party 1
  NetProfile profile{};                // real shaping: delayed, rate-limited writes
  std::string passphrase;              // when set, every frame carries a MAC tag
  int connect_timeout_ms = 10000;
};

// Brings up the full mesh and blocks until every link exists: this party
// accepts connections from lower party indices and dials the higher ones.
std::shared_ptr<Transport> tcp_mesh_connect(const TcpPeerConfig& cfg);

}  // namespace kex

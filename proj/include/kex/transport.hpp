#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace kex {

// Link shaping. Zeroes mean unshaped: deliver as fast as the medium allows.
struct NetProfile {
  double latency_ms = 0;
  double bandwidth_mbps = 0;
};

// Point-to-point ordered frame delivery between the protocol parties.
// Frames are complete wire frames (length prefix included); recv is blocking
// and directed, returning the next frame from that specific peer.
class Transport {
 public:
  virtual ~Transport() = default;

  virtual int self() const = 0;       // own party index, 1..n
  virtual int num_peers() const = 0;  // n

  virtual void send(int to, std::vector<uint8_t> frame) = 0;
  virtual std::vector<uint8_t> recv(int from) = 0;

  // Simulated clock of the shaped in-process transport, seconds. Socket
  // transports report 0 here; callers measure wall time instead.
  virtual double virtual_elapsed_s() const { return 0.0; }

  virtual void close() {}
};

}  // namespace kex

#pragma once

#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <vector>

#include "kex/transport.hpp"

namespace kex {

// In-process hub connecting n party endpoints through FIFO queues, with a
// deterministic virtual clock per party instead of real sleeps. Each sender
// has a single uplink: a frame occupies it for bytes*8/bandwidth seconds and
// arrives latency later; the receiver's clock jumps to the arrival time.
// Clock updates happen in each party's own program order, so shaped runtimes
// are reproducible regardless of thread scheduling.
class LocalHub : public std::enable_shared_from_this<LocalHub> {
 public:
  static std::shared_ptr<LocalHub> create(int num_peers, NetProfile profile = {});

  std::shared_ptr<Transport> endpoint(int party);  // party index 1..n

  // Max over the party clocks. Meaningful once the protocol threads finished.
  double virtual_elapsed_s() const;

  int num_peers() const { return num_peers_; }

  // Unblocks every pending and future recv with a TransportError. Used when
  // one party fails so the others don't wait forever.
  void shutdown();

 private:
  LocalHub(int num_peers, NetProfile profile);

  struct Msg {
    std::vector<uint8_t> frame;
    double arrival = 0;
  };
  struct Channel {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<Msg> q;
    bool closed = false;
  };
  struct PartyClock {
    double now = 0;      // virtual time of this party
    double tx_free = 0;  // when its uplink becomes idle
  };

  Channel& channel(int from, int to);

  friend class LocalEndpoint;
  int num_peers_;
  NetProfile profile_;
  std::vector<std::unique_ptr<Channel>> channels_;  // (from-1)*n + (to-1)
  std::vector<PartyClock> clocks_;                  // touched only by the owning party
};

}  // namespace kex

#include "kex/transport_local.hpp"

#include <algorithm>

#include "kex/errors.hpp"

namespace kex {

class LocalEndpoint : public Transport {
 public:
  LocalEndpoint(std::shared_ptr<LocalHub> hub, int self) : hub_(std::move(hub)), self_(self) {}

  int self() const override { return self_; }
  int num_peers() const override { return hub_->num_peers_; }

  void send(int to, std::vector<uint8_t> frame) override {
    if (to < 1 || to > hub_->num_peers_ || to == self_)
      throw TransportError("local send: bad destination");
    auto& clk = hub_->clocks_[self_ - 1];
    const auto& prof = hub_->profile_;
    double depart = std::max(clk.tx_free, clk.now);
    if (prof.bandwidth_mbps > 0)
      depart += double(frame.size()) * 8.0 / (prof.bandwidth_mbps * 1e6);
    clk.tx_free = depart;
    double arrival = depart + prof.latency_ms / 1000.0;
    auto& ch = hub_->channel(self_, to);
    {
      std::lock_guard<std::mutex> lk(ch.mu);
      ch.q.push_back({std::move(frame), arrival});
    }
    ch.cv.notify_one();
  }

  std::vector<uint8_t> recv(int from) override {
    if (from < 1 || from > hub_->num_peers_ || from == self_)
      throw TransportError("local recv: bad source");
    auto& ch = hub_->channel(from, self_);
    LocalHub::Msg msg;
    {
      std::unique_lock<std::mutex> lk(ch.mu);
      ch.cv.wait(lk, [&] { return !ch.q.empty() || ch.closed; });
      if (ch.q.empty()) throw TransportError("local recv: hub shut down");
      msg = std::move(ch.q.front());
      ch.q.pop_front();
    }
    auto& clk = hub_->clocks_[self_ - 1];
    clk.now = std::max(clk.now, msg.arrival);
    return std::move(msg.frame);
  }

  double virtual_elapsed_s() const override { return hub_->clocks_[self_ - 1].now; }

  void close() override { hub_->shutdown(); }

 private:
  std::shared_ptr<LocalHub> hub_;
  int self_;
};

LocalHub::LocalHub(int num_peers, NetProfile profile)
    : num_peers_(num_peers), profile_(profile), clocks_(num_peers) {
  if (num_peers < 2) throw ConfigError("local hub: need at least 2 peers");
  channels_.resize(size_t(num_peers) * num_peers);
  for (auto& ch : channels_) ch = std::make_unique<Channel>();
}

std::shared_ptr<LocalHub> LocalHub::create(int num_peers, NetProfile profile) {
  return std::shared_ptr<LocalHub>(new LocalHub(num_peers, profile));
}

std::shared_ptr<Transport> LocalHub::endpoint(int party) {
  if (party < 1 || party > num_peers_) throw ConfigError("local hub: bad party index");
  return std::make_shared<LocalEndpoint>(shared_from_this(), party);
}

LocalHub::Channel& LocalHub::channel(int from, int to) {
  return *channels_[size_t(from - 1) * num_peers_ + size_t(to - 1)];
}

double LocalHub::virtual_elapsed_s() const {
  double m = 0;
  for (const auto& c : clocks_) m = std::max(m, c.now);
  return m;
}

void LocalHub::shutdown() {
  for (auto& ch : channels_) {
    {
      std::lock_guard<std::mutex> lk(ch->mu);
      ch->closed = true;
    }
    ch->cv.notify_all();
  }
}

}  // namespace kex

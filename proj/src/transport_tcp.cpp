#include "kex/transport_tcp.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <thread>

#include "kex/errors.hpp"
#include "kex/siphash.hpp"
#include "kex/wire.hpp"

namespace kex {

namespace {

constexpr uint8_t kHelloMagic[4] = {'K', 'X', 'M', '1'};
constexpr size_t kHelloBytes = 6;  // magic + sender + target
constexpr size_t kTagBytes = 8;
constexpr uint32_t kMaxFrameBody = 1u << 26;

using Clock = std::chrono::steady_clock;

struct HostPort {
  std::string host;
  std::string port;
};

HostPort parse_endpoint(const std::string& ep) {
  auto colon = ep.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == ep.size())
    throw ConfigError("tcp: endpoint must be host:port, got '" + ep + "'");
  return {ep.substr(0, colon), ep.substr(colon + 1)};
}

void write_all(int fd, const uint8_t* data, size_t len) {
  while (len > 0) {
    ssize_t sent = ::send(fd, data, len, MSG_NOSIGNAL);
    if (sent <= 0) throw TransportError("tcp send: connection lost");
    data += size_t(sent);
    len -= size_t(sent);
  }
}

bool read_all(int fd, uint8_t* data, size_t len) {
  while (len > 0) {
    ssize_t got = ::recv(fd, data, len, 0);
    if (got <= 0) return false;
    data += size_t(got);
    len -= size_t(got);
  }
  return true;
}

void set_nodelay(int fd) {
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

void pack_tag(uint8_t out[kTagBytes], uint64_t v) {
  for (size_t i = 0; i < kTagBytes; ++i) out[i] = uint8_t(v >> (8 * i));
}

}  // namespace

class TcpMesh : public Transport {
 public:
  TcpMesh(const TcpPeerConfig& cfg) : cfg_(cfg) {
    int n = int(cfg.endpoints.size());
    if (n < 2) throw ConfigError("tcp: need at least two parties");
    if (cfg.self < 1 || cfg.self > n) throw ConfigError("tcp: self index out of range");
    for (const auto& ep : cfg.endpoints) parse_endpoint(ep);
    if (!cfg.passphrase.empty()) {
      mac_ = true;
      key_ = mac_key_from_passphrase(cfg.passphrase);
    }
    links_.resize(size_t(n) + 1);
    establish();
    for (int p = 1; p <= n; ++p)
      if (p != cfg_.self) {
        auto& link = links_[size_t(p)];
        link->sender = std::thread([this, &link = *link] { sender_loop(link); });
      }
  }

  ~TcpMesh() override { close(); }

  int self() const override { return cfg_.self; }
  int num_peers() const override { return int(cfg_.endpoints.size()); }

  void send(int to, std::vector<uint8_t> frame) override {
    auto& link = *links_.at(size_t(to));
    std::lock_guard lock(link.mu);
    if (link.stop) throw TransportError("tcp send: mesh closed");
    link.q.push_back(std::move(frame));
    link.cv.notify_one();
  }

  std::vector<uint8_t> recv(int from) override {
    auto& link = *links_.at(size_t(from));
    uint8_t prefix[kLengthPrefixBytes];
    if (!read_all(link.fd, prefix, sizeof prefix))
      throw TransportError("tcp recv: connection closed");
    uint32_t body = uint32_t(prefix[0]) | uint32_t(prefix[1]) << 8 | uint32_t(prefix[2]) << 16 |
                    uint32_t(prefix[3]) << 24;
    if (body < kFrameHeaderBytes || body > kMaxFrameBody)
      throw TransportError("tcp recv: bad frame length");
    std::vector<uint8_t> frame(kLengthPrefixBytes + body);
    std::memcpy(frame.data(), prefix, sizeof prefix);
    if (!read_all(link.fd, frame.data() + kLengthPrefixBytes, body))
      throw TransportError("tcp recv: connection closed");
    if (mac_) {
      uint8_t tag[kTagBytes];
      if (!read_all(link.fd, tag, sizeof tag))
        throw TransportError("tcp recv: connection closed");
      uint8_t expect[kTagBytes];
      pack_tag(expect, siphash24(frame, key_));
      if (std::memcmp(tag, expect, kTagBytes) != 0)
        throw TransportError("tcp recv: frame authentication failed");
    }
    return frame;
  }

  void close() override {
    for (auto& link : links_) {
      if (!link) continue;
      {
        std::lock_guard lock(link->mu);
        if (link->stop) continue;
        link->stop = true;
      }
      link->cv.notify_all();
      if (link->sender.joinable()) link->sender.join();
      if (link->fd >= 0) {
        ::shutdown(link->fd, SHUT_RDWR);
        ::close(link->fd);
        link->fd = -1;
      }
    }
  }

 private:
  struct Link {
    int fd = -1;
    std::mutex mu;
    std::condition_variable cv;
    std::deque<std::vector<uint8_t>> q;
    bool stop = false;
    Clock::time_point free_at = Clock::time_point::min();
    std::thread sender;
  };

  void sender_loop(Link& link) {
    const bool shaped = cfg_.profile.latency_ms > 0 || cfg_.profile.bandwidth_mbps > 0;
    for (;;) {
      std::vector<uint8_t> frame;
      {
        std::unique_lock lock(link.mu);
        link.cv.wait(lock, [&] { return link.stop || !link.q.empty(); });
        if (link.q.empty()) return;  // stop requested and drained
        frame = std::move(link.q.front());
        link.q.pop_front();
      }
      if (shaped) {
        auto now = Clock::now();
        auto depart = std::max(link.free_at, now);
        if (cfg_.profile.bandwidth_mbps > 0) {
          double tx_s = double(frame.size()) * 8.0 / (cfg_.profile.bandwidth_mbps * 1e6);
          depart += std::chrono::duration_cast<Clock::duration>(
              std::chrono::duration<double>(tx_s));
        }
        link.free_at = depart;
        auto write_at = depart + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(cfg_.profile.latency_ms / 1e3));
        std::this_thread::sleep_until(write_at);
      }
      try {
        write_all(link.fd, frame.data(), frame.size());
        if (mac_) {
          uint8_t tag[kTagBytes];
          pack_tag(tag, siphash24(frame, key_));
          write_all(link.fd, tag, sizeof tag);
        }
      } catch (const TransportError&) {
        std::lock_guard lock(link.mu);
        link.stop = true;
        return;  // the peer will observe the dead socket on its next recv
      }
    }
  }

  void hello_send(int fd, int target) {
    uint8_t buf[kHelloBytes];
    std::memcpy(buf, kHelloMagic, 4);
    buf[4] = uint8_t(cfg_.self);
    buf[5] = uint8_t(target);
    write_all(fd, buf, sizeof buf);
    if (mac_) {
      uint8_t tag[kTagBytes];
      pack_tag(tag, siphash24(std::span<const uint8_t>(buf, sizeof buf), key_));
      write_all(fd, tag, sizeof tag);
    }
  }

  int hello_read(int fd) {
    uint8_t buf[kHelloBytes];
    if (!read_all(fd, buf, sizeof buf)) throw TransportError("tcp: peer hung up during hello");
    if (std::memcmp(buf, kHelloMagic, 4) != 0 || buf[5] != uint8_t(cfg_.self))
      throw TransportError("tcp: bad hello from peer");
    if (mac_) {
      uint8_t tag[kTagBytes];
      if (!read_all(fd, tag, sizeof tag)) throw TransportError("tcp: peer hung up during hello");
      uint8_t expect[kTagBytes];
      pack_tag(expect, siphash24(std::span<const uint8_t>(buf, sizeof buf), key_));
      if (std::memcmp(tag, expect, kTagBytes) != 0)
        throw TransportError("tcp: hello authentication failed");
    }
    return int(buf[4]);
  }

  int dial(const HostPort& hp, Clock::time_point deadline) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    for (;;) {
      addrinfo* res = nullptr;
      if (getaddrinfo(hp.host.c_str(), hp.port.c_str(), &hints, &res) == 0) {
        for (addrinfo* ai = res; ai; ai = ai->ai_next) {
          int fd = socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
          if (fd < 0) continue;
          if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
            freeaddrinfo(res);
            set_nodelay(fd);
            return fd;
          }
          ::close(fd);
        }
        freeaddrinfo(res);
      }
      if (Clock::now() >= deadline)
        throw TransportError("tcp: timed out dialing " + hp.host + ":" + hp.port);
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  }

  void establish() {
    int n = int(cfg_.endpoints.size());
    auto deadline = Clock::now() + std::chrono::milliseconds(cfg_.connect_timeout_ms);
    int expected_in = cfg_.self - 1;  // lower indices dial us

    int listener = -1;
    if (expected_in > 0) {
      HostPort own = parse_endpoint(cfg_.endpoints[size_t(cfg_.self - 1)]);
      addrinfo hints{};
      hints.ai_family = AF_UNSPEC;
      hints.ai_socktype = SOCK_STREAM;
      hints.ai_flags = AI_PASSIVE;
      addrinfo* res = nullptr;
      int rc = getaddrinfo(own.host.c_str(), own.port.c_str(), &hints, &res);
      if (rc != 0) throw TransportError("tcp: cannot resolve own endpoint");
      for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        listener = socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (listener < 0) continue;
        int one = 1;
        setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        if (bind(listener, ai->ai_addr, ai->ai_addrlen) == 0 && listen(listener, n) == 0) break;
        ::close(listener);
        listener = -1;
      }
      freeaddrinfo(res);
      if (listener < 0) throw TransportError("tcp: cannot listen on own endpoint");
    }

    try {
      // dial upward first so every party's listener is already bound before
      // anyone waits on accepts
      for (int p = cfg_.self + 1; p <= n; ++p) {
        auto link = std::make_unique<Link>();
        link->fd = dial(parse_endpoint(cfg_.endpoints[size_t(p - 1)]), deadline);
        links_[size_t(p)] = std::move(link);
        hello_send(links_[size_t(p)]->fd, p);
      }
      for (int got = 0; got < expected_in; ++got) {
        pollfd pfd{listener, POLLIN, 0};
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
        int rc = ::poll(&pfd, 1, int(std::max<int64_t>(left.count(), 0)));
        if (rc <= 0) throw TransportError("tcp: timed out waiting for peers");
        int fd = ::accept(listener, nullptr, nullptr);
        if (fd < 0) throw TransportError("tcp: accept failed");
        set_nodelay(fd);
        int who = 0;
        try {
          who = hello_read(fd);
          if (who < 1 || who >= cfg_.self || links_[size_t(who)])
            throw TransportError("tcp: unexpected hello sender");
        } catch (...) {
          ::close(fd);
          throw;
        }
        auto link = std::make_unique<Link>();
        link->fd = fd;
        links_[size_t(who)] = std::move(link);
      }
    } catch (...) {
      if (listener >= 0) ::close(listener);
      for (auto& link : links_)
        if (link && link->fd >= 0) ::close(link->fd);
      throw;
    }
    if (listener >= 0) ::close(listener);
  }

  TcpPeerConfig cfg_;
  bool mac_ = false;
  std::array<uint8_t, 16> key_{};
  std::vector<std::unique_ptr<Link>> links_;  // index by party, own slot empty
};

std::shared_ptr<Transport> tcp_mesh_connect(const TcpPeerConfig& cfg) {
  return std::make_shared<TcpMesh>(cfg);
}

}  // namespace kex

#pragma once

#include <exception>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "kex/session.hpp"
#include "kex/transport_local.hpp"

namespace kex {

template <typename T>
struct LocalRunResult {
  std::vector<T> per_party;        // body's return value, index 0 = party 1
  std::vector<TraceStats> stats;   // per-party trace
  double virtual_s = 0;            // shaped clock after the run
};

inline uint64_t party_seed(uint64_t master, int party) {
  uint64_t x = master + 0x9e3779b97f4a7c15ull * uint64_t(party);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Runs body(Session&) on every party in its own thread over an in-process
// hub. If a party throws, the hub is shut down so the rest unblock, and the
// first real failure is rethrown.
template <typename F>
auto run_local_parties(const SharingParams& params, NetProfile profile, uint64_t seed,
                       F&& body) {
  using T = std::invoke_result_t<F&, Session&>;
  static_assert(!std::is_void_v<T>, "body must return a value");

  auto hub = LocalHub::create(params.num_peers, profile);
  int n = params.num_peers;
  LocalRunResult<T> result;
  result.per_party.resize(size_t(n));
  result.stats.resize(size_t(n));
  std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
  std::vector<std::thread> threads;
  threads.reserve(size_t(n));

  for (int p = 1; p <= n; ++p) {
    threads.emplace_back([&, p] {
      auto endpoint = hub->endpoint(p);
      try {
        Session session(params, endpoint, 1, party_seed(seed, p));
        result.per_party[size_t(p - 1)] = body(session);
        result.stats[size_t(p - 1)] = session.stats();
      } catch (...) {
        errors[size_t(p - 1)] = std::current_exception();
        endpoint->close();
      }
    });
  }
  for (auto& t : threads) t.join();
  result.virtual_s = hub->virtual_elapsed_s();

  // prefer a party's own failure over the shutdown fallout it caused
  std::exception_ptr first;
  for (const auto& e : errors) {
    if (!e) continue;
    if (!first) first = e;
    try {
      std::rethrow_exception(e);
    } catch (const TransportError&) {
    } catch (...) {
      first = e;
      break;
    }
  }
  if (first) std::rethrow_exception(first);
  return result;
}

}  // namespace kex

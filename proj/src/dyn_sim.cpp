#include "kex/dyn_sim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <queue>
#include <sstream>

#include "kex/errors.hpp"

namespace kex {

namespace {

uint64_t mix_seed(uint64_t seed, uint64_t salt) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// first day on which a per-day p coin comes up, inverse CDF
double geometric_stay(double p, Prg& rng) {
  double u = rng.unit_real();
  return std::floor(std::log1p(-u) / std::log1p(-p)) + 1.0;
}

enum EventKind { kEvArrival = 0, kEvDeparture, kEvMatchRun, kEvCompletion, kEvReentry };

struct Event {
  double time;
  uint64_t seq;  // scheduling order breaks time ties
  EventKind kind;
  int arg;
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

struct PairSim {
  PairState state = PairState::kInPool;
  bool arrived = false;
  bool sensitized = false;
  double entry = 0.0;
};

// records never change, so pairwise compatibility is memoized across match
// runs; 0 unknown, 1 edge, 2 no edge
struct CompatCache {
  const Arrival* arrivals;
  size_t n;
  std::vector<uint8_t> memo;

  CompatCache(std::span<const Arrival> a)
      : arrivals(a.data()), n(a.size()), memo(n * n, 0) {}

  bool edge(int a, int b) {
    uint8_t& slot = memo[static_cast<size_t>(a) * n + static_cast<size_t>(b)];
    if (slot == 0) {
      const auto& ra = arrivals[a].medical;
      const auto& rb = arrivals[b].medical;
      slot = (directed_compatible(ra, rb) && directed_compatible(rb, ra)) ? 1 : 2;
      memo[static_cast<size_t>(b) * n + static_cast<size_t>(a)] = slot;
    }
    return slot == 1;
  }
};

struct PendingRun {
  std::vector<int> members;
  std::vector<std::pair<int, int>> offers;
};

std::vector<std::pair<int, int>> match_snapshot(std::span<const int> members,
                                                CompatCache& compat) {
  int n = static_cast<int>(members.size());
  Graph g(n);
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) {
      if (compat.edge(members[static_cast<size_t>(u - 1)],
                      members[static_cast<size_t>(v - 1)])) {
        g.add_edge(u, v);
      }
    }
  }
  Matching m = pape_conradt(g);
  std::vector<std::pair<int, int>> offers;
  for (int u = 1; u <= n; ++u) {
    if (m.mate[static_cast<size_t>(u)] > u) {
      offers.emplace_back(members[static_cast<size_t>(u - 1)],
                          members[static_cast<size_t>(m.mate[static_cast<size_t>(u)] - 1)]);
    }
  }
  return offers;
}

}  // namespace

std::string backend_name(Backend b) {
  return b == Backend::kConventional ? "conventional" : "privacy_preserving";
}

Backend backend_from_name(const std::string& name) {
  if (name == "conventional") return Backend::kConventional;
  if (name == "privacy_preserving") return Backend::kPrivacyPreserving;
  throw ConfigError("sim: unknown backend '" + name + "'");
}

void SimConfig::validate(const RuntimeModel& model) const {
  if (arrival_interval_days < 1) throw ConfigError("sim: arrival interval must be >= 1 day");
  if (match_run_interval_days < 1) throw ConfigError("sim: match interval must be >= 1 day");
  if (mean_stay_days < 1) throw ConfigError("sim: mean stay must be >= 1 day");
  if (horizon_days < 1) throw ConfigError("sim: horizon must be positive");
  for (double p : {refusal_prob, crossmatch_fail_sensitized, crossmatch_fail_other}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("sim: probability outside [0,1]");
  }
  if (reentry_refusal_days < 0 || reentry_crossmatch_days < 0)
    throw ConfigError("sim: negative reentry delay");
  if (generator.num_antigens < 1) throw ConfigError("sim: generator needs antigens");
  if (model.latency_factors.find(latency_ms) == model.latency_factors.end())
    throw ConfigError("sim: no runtime calibration for latency " +
                      std::to_string(latency_ms) + "ms");
  model.validate();
}

std::vector<Arrival> synthetic_arrivals(const SimConfig& cfg, uint64_t seed) {
  Prg rng(seed);
  std::vector<Arrival> out;
  double p_leave = 1.0 / static_cast<double>(cfg.mean_stay_days);
  double t = 0.0;
  for (;;) {
    if (cfg.poisson_arrivals) {
      t += -static_cast<double>(cfg.arrival_interval_days) * std::log1p(-rng.unit_real());
    } else {
      t += static_cast<double>(cfg.arrival_interval_days);
    }
    if (t > static_cast<double>(cfg.horizon_days)) break;
    Arrival a;
    a.time = t;
    a.medical = random_pair(cfg.generator, rng);
    a.stay_days = geometric_stay(p_leave, rng);
    out.push_back(std::move(a));
  }
  return out;
}

OfferOutcome resolve_offer(const SimConfig& cfg, bool a_sensitized, bool b_sensitized,
                           Prg& rng) {
  bool refused = rng.unit_real() < cfg.refusal_prob;
  double pa = a_sensitized ? cfg.crossmatch_fail_sensitized : cfg.crossmatch_fail_other;
  double pb = b_sensitized ? cfg.crossmatch_fail_sensitized : cfg.crossmatch_fail_other;
  bool fail_a = rng.unit_real() < pa;
  bool fail_b = rng.unit_real() < pb;
  if (refused) return OfferOutcome::kRefused;
  if (fail_a || fail_b) return OfferOutcome::kCrossmatchFailed;
  return OfferOutcome::kTransplanted;
}

Metrics simulate(const SimConfig& cfg, std::span<const Arrival> arrivals,
                 uint64_t offer_seed, const RuntimeModel& model) {
  cfg.validate(model);
  Prg offer_rng(offer_seed);
  CompatCache compat(arrivals);
  std::vector<PairSim> pairs(arrivals.size());
  std::vector<PendingRun> pending;
  Metrics metrics;
  double horizon = static_cast<double>(cfg.horizon_days);
  double wait_sum = 0.0;

  std::priority_queue<Event, std::vector<Event>, EventLater> events;
  uint64_t seq = 0;
  for (size_t i = 0; i < arrivals.size(); ++i) {
    events.push({arrivals[i].time, seq++, kEvArrival, static_cast<int>(i)});
  }
  for (double t = cfg.match_run_interval_days; t <= horizon;
       t += cfg.match_run_interval_days) {
    events.push({t, seq++, kEvMatchRun, 0});
  }

  auto settle = [&](double now, int a, int b) {
    bool a_gone = pairs[size_t(a)].state == PairState::kDeparted;
    bool b_gone = pairs[size_t(b)].state == PairState::kDeparted;
    if (a_gone || b_gone) {
      metrics.voided_offers++;
      if (!a_gone) pairs[size_t(a)].state = PairState::kInPool;
      if (!b_gone) pairs[size_t(b)].state = PairState::kInPool;
      return;
    }
    auto outcome = resolve_offer(cfg, pairs[size_t(a)].sensitized,
                                 pairs[size_t(b)].sensitized, offer_rng);
    if (outcome == OfferOutcome::kTransplanted) {
      for (int id : {a, b}) {
        pairs[size_t(id)].state = PairState::kTransplanted;
        wait_sum += now - pairs[size_t(id)].entry;
      }
      metrics.transplants += 2;
      return;
    }
    int delay = outcome == OfferOutcome::kRefused ? cfg.reentry_refusal_days
                                                  : cfg.reentry_crossmatch_days;
    (outcome == OfferOutcome::kRefused ? metrics.refusals
                                       : metrics.crossmatch_failures)++;
    for (int id : {a, b}) {
      pairs[size_t(id)].state = PairState::kReentering;
      events.push({now + delay, seq++, kEvReentry, id});
    }
  };

  while (!events.empty()) {
    Event ev = events.top();
    if (ev.time > horizon) break;
    events.pop();
    switch (ev.kind) {
      case kEvArrival: {
        auto& p = pairs[size_t(ev.arg)];
        p.arrived = true;
        p.state = PairState::kInPool;
        p.sensitized = arrivals[size_t(ev.arg)].medical.sensitized;
        p.entry = ev.time;
        metrics.arrivals++;
        events.push({ev.time + arrivals[size_t(ev.arg)].stay_days, seq++, kEvDeparture,
                     ev.arg});
        break;
      }
      case kEvDeparture: {
        auto& p = pairs[size_t(ev.arg)];
        if (p.state == PairState::kInPool || p.state == PairState::kInMatchRun ||
            p.state == PairState::kReentering) {
          p.state = PairState::kDeparted;
        }
        break;
      }
      case kEvReentry: {
        auto& p = pairs[size_t(ev.arg)];
        if (p.state == PairState::kReentering) p.state = PairState::kInPool;
        break;
      }
      case kEvCompletion: {
        auto& run = pending[size_t(ev.arg)];
        for (const auto& [a, b] : run.offers) settle(ev.time, a, b);
        for (int id : run.members) {
          if (pairs[size_t(id)].state == PairState::kInMatchRun)
            pairs[size_t(id)].state = PairState::kInPool;
        }
        break;
      }
      case kEvMatchRun: {
        std::vector<int> pool;
        for (size_t i = 0; i < pairs.size(); ++i) {
          if (pairs[i].arrived && pairs[i].state == PairState::kInPool)
            pool.push_back(static_cast<int>(i));
        }
        MatchRunLog log;
        log.time = ev.time;
        log.pool_size = static_cast<int>(pool.size());
        if (pool.empty()) {
          metrics.match_runs.push_back(std::move(log));
          break;
        }
        if (cfg.backend == Backend::kConventional) {
          auto offers = match_snapshot(pool, compat);
          log.sub_pool_sizes.push_back(log.pool_size);
          log.completions.push_back(ev.time);
          log.offers = static_cast<int>(offers.size());
          for (const auto& [a, b] : offers) settle(ev.time, a, b);
          metrics.match_runs.push_back(std::move(log));
          break;
        }
        int cap = model.max_feasible(cfg.latency_ms,
                                     cfg.match_run_interval_days * 24.0);
        log.cap = cap;
        if (cap == 0) {
          // nothing fits before the next run; skip this one
          log.infeasible = true;
          metrics.infeasible_runs++;
          metrics.match_runs.push_back(std::move(log));
          break;
        }
        offer_rng.shuffle(pool);  // uniform assignment to sub-pools
        auto sizes = split_sizes(log.pool_size, cap);
        if (sizes.size() >= 2) metrics.sub_pool_splits++;
        size_t offset = 0;
        for (int size : sizes) {
          PendingRun run;
          run.members.assign(pool.begin() + static_cast<long>(offset),
                             pool.begin() + static_cast<long>(offset + size_t(size)));
          offset += static_cast<size_t>(size);
          // assignment is random, matching input order is not
          std::sort(run.members.begin(), run.members.end());
          run.offers = match_snapshot(run.members, compat);
          log.offers += static_cast<int>(run.offers.size());
          for (int id : run.members) pairs[size_t(id)].state = PairState::kInMatchRun;
          double done = ev.time + model.runtime_hours(cfg.latency_ms, size) / 24.0;
          log.sub_pool_sizes.push_back(size);
          log.completions.push_back(done);
          events.push({done, seq++, kEvCompletion, static_cast<int>(pending.size())});
          pending.push_back(std::move(run));
        }
        metrics.match_runs.push_back(std::move(log));
        break;
      }
    }
  }

  for (const auto& p : pairs) {
    if (!p.arrived) continue;
    switch (p.state) {
      case PairState::kInPool: metrics.final_in_pool++; break;
      case PairState::kInMatchRun: metrics.final_in_match_run++; break;
      case PairState::kReentering: metrics.final_reentering++; break;
      case PairState::kDeparted: metrics.final_departed++; break;
      case PairState::kTransplanted: break;
    }
  }
  if (metrics.transplants > 0)
    metrics.avg_wait_days = wait_sum / metrics.transplants;
  return metrics;
}

Metrics run_simulation(const SimConfig& cfg, uint64_t seed, const RuntimeModel& model) {
  cfg.validate(model);
  auto arrivals = synthetic_arrivals(cfg, mix_seed(seed, 1));
  return simulate(cfg, arrivals, mix_seed(seed, 2), model);
}

SweepResult compare_backends(const SweepSpec& spec, const RuntimeModel& model) {
  if (spec.runs < 1) throw ConfigError("sim: sweep needs at least one run");
  if (spec.arrival_intervals.empty() || spec.match_intervals.empty() ||
      spec.latencies.empty())
    throw ConfigError("sim: empty sweep grid");
  SweepResult res;
  for (int arrival : spec.arrival_intervals) {
    for (int match : spec.match_intervals) {
      for (int latency : spec.latencies) {
        SimConfig conv = spec.base;
        conv.arrival_interval_days = arrival;
        conv.match_run_interval_days = match;
        conv.latency_ms = latency;
        conv.backend = Backend::kConventional;
        SimConfig priv = conv;
        priv.backend = Backend::kPrivacyPreserving;

        GridCell cell;
        cell.arrival_interval = arrival;
        cell.match_interval = match;
        cell.latency_ms = latency;
        for (int run = 0; run < spec.runs; ++run) {
          uint64_t seed = mix_seed(spec.seed, static_cast<uint64_t>(run));
          auto arrivals = synthetic_arrivals(conv, mix_seed(seed, 1));
          auto mc = simulate(conv, arrivals, mix_seed(seed, 2), model);
          auto mp = simulate(priv, arrivals, mix_seed(seed, 2), model);
          double pct = mc.transplants > 0
                           ? 100.0 * mp.transplants / mc.transplants
                           : 100.0;
          res.rows.push_back({arrival, match, latency, Backend::kConventional, seed,
                              mc.transplants, mc.avg_wait_days, mc.sub_pool_splits,
                              100.0});
          res.rows.push_back({arrival, match, latency, Backend::kPrivacyPreserving,
                              seed, mp.transplants, mp.avg_wait_days,
                              mp.sub_pool_splits, pct});
          cell.conventional_transplants += mc.transplants;
          cell.conventional_wait_days += mc.avg_wait_days;
          cell.pp_transplants += mp.transplants;
          cell.pp_wait_days += mp.avg_wait_days;
        }
        cell.conventional_transplants /= spec.runs;
        cell.conventional_wait_days /= spec.runs;
        cell.pp_transplants /= spec.runs;
        cell.pp_wait_days /= spec.runs;
        cell.pct_of_conventional =
            cell.conventional_transplants > 0.0
                ? 100.0 * cell.pp_transplants / cell.conventional_transplants
                : 100.0;
        res.cells.push_back(cell);
      }
    }
  }
  return res;
}

std::string sweep_rows_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "arrival_interval,match_interval,latency,backend,seed,transplants,"
         "avg_wait_days,sub_pool_splits,pct_of_conventional\n";
  out << std::fixed << std::setprecision(3);
  for (const auto& r : rows) {
    out << r.arrival_interval << ',' << r.match_interval << ',' << r.latency_ms << ','
        << backend_name(r.backend) << ',' << r.seed << ',' << r.transplants << ','
        << r.avg_wait_days << ',' << r.sub_pool_splits << ','
        << r.pct_of_conventional << '\n';
  }
  return out.str();
}

std::string sweep_summary_csv(const std::vector<GridCell>& cells) {
  std::ostringstream out;
  out << "arrival_interval,match_interval,latency,conventional_transplants,"
         "conventional_wait_days,pp_transplants,pp_wait_days,pct_of_conventional\n";
  out << std::fixed << std::setprecision(3);
  for (const auto& c : cells) {
    out << c.arrival_interval << ',' << c.match_interval << ',' << c.latency_ms << ','
        << c.conventional_transplants << ',' << c.conventional_wait_days << ','
        << c.pp_transplants << ',' << c.pp_wait_days << ','
        << c.pct_of_conventional << '\n';
  }
  return out.str();
}

}  // namespace kex

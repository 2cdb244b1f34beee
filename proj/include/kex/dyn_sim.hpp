#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kex/compat.hpp"
#include "kex/prg.hpp"
#include "kex/runtime_model.hpp"

namespace kex {

enum class Backend { kConventional, kPrivacyPreserving };

std::string backend_name(Backend b);
Backend backend_from_name(const std::string& name);

struct SimConfig {
  int arrival_interval_days = 2;
  int match_run_interval_days = 7;
  int mean_stay_days = 400;
  double refusal_prob = 0.1;
  double crossmatch_fail_sensitized = 0.35;
  double crossmatch_fail_other = 0.10;
  int reentry_refusal_days = 2;
  int reentry_crossmatch_days = 7;
  int horizon_days = 1825;
  Backend backend = Backend::kConventional;
  int latency_ms = 1;
  // arrivals are one pair per fixed interval; exponential inter-arrival
  // times with the same mean are available behind this flag
  bool poisson_arrivals = false;
  GeneratorConfig generator;

  void validate(const RuntimeModel& model) const;
};

enum class PairState { kInPool, kInMatchRun, kReentering, kDeparted, kTransplanted };

struct Arrival {
  double time = 0.0;
  double stay_days = 1.0;  // departs at time + stay_days unless transplanted
  PairRecord medical;
};

// fixed-interval (or Poisson) schedule with generator records and geometric
// stays; independent of backend and match interval so backend comparisons
// share the same pair population per seed
std::vector<Arrival> synthetic_arrivals(const SimConfig& cfg, uint64_t seed);

struct MatchRunLog {
  double time = 0.0;
  int pool_size = 0;
  int cap = 0;                      // largest sub-pool that fits the interval; 0 conventional
  std::vector<int> sub_pool_sizes;  // conventional: whole pool at once
  std::vector<double> completions;  // absolute days, one per sub-pool
  int offers = 0;
  bool infeasible = false;  // no sub-pool size fits, pool left untouched

  bool operator==(const MatchRunLog&) const = default;
};

struct Metrics {
  int arrivals = 0;
  int transplants = 0;  // patients; pairs transplant two at a time
  double avg_wait_days = 0.0;
  int sub_pool_splits = 0;  // match runs that needed two or more sub-pools
  int refusals = 0;
  int crossmatch_failures = 0;
  int voided_offers = 0;  // a side departed during protocol execution
  int infeasible_runs = 0;
  int final_in_pool = 0;
  int final_in_match_run = 0;
  int final_reentering = 0;
  int final_departed = 0;
  std::vector<MatchRunLog> match_runs;

  bool operator==(const Metrics&) const = default;
};

enum class OfferOutcome { kTransplanted, kRefused, kCrossmatchFailed };

// one refusal roll per offered match, then one directed crossmatch roll per
// patient; rolls are always all consumed so the stream shape is fixed
OfferOutcome resolve_offer(const SimConfig& cfg, bool a_sensitized, bool b_sensitized,
                           Prg& rng);

Metrics simulate(const SimConfig& cfg, std::span<const Arrival> arrivals,
                 uint64_t offer_seed, const RuntimeModel& model);

Metrics run_simulation(const SimConfig& cfg, uint64_t seed,
                       const RuntimeModel& model = RuntimeModel::defaults());

struct SweepRow {
  int arrival_interval = 0;
  int match_interval = 0;
  int latency_ms = 0;
  Backend backend = Backend::kConventional;
  uint64_t seed = 0;
  int transplants = 0;
  double avg_wait_days = 0.0;
  int sub_pool_splits = 0;
  double pct_of_conventional = 100.0;
};

struct GridCell {
  int arrival_interval = 0;
  int match_interval = 0;
  int latency_ms = 0;
  double conventional_transplants = 0.0;
  double conventional_wait_days = 0.0;
  double pp_transplants = 0.0;
  double pp_wait_days = 0.0;
  double pct_of_conventional = 100.0;
};

struct SweepSpec {
  std::vector<int> arrival_intervals{1, 2, 7, 14};
  std::vector<int> match_intervals{1, 7, 30, 120};
  std::vector<int> latencies{1};
  int runs = 50;
  uint64_t seed = 1;
  SimConfig base;
};

struct SweepResult {
  std::vector<SweepRow> rows;    // one per (cell, seed, backend)
  std::vector<GridCell> cells;   // means over seeds, grid order
};

// both backends on shared arrival streams (common random numbers per seed)
SweepResult compare_backends(const SweepSpec& spec,
                             const RuntimeModel& model = RuntimeModel::defaults());

std::string sweep_rows_csv(const std::vector<SweepRow>& rows);
std::string sweep_summary_csv(const std::vector<GridCell>& cells);

}  // namespace kex

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace kex {

// Protocol wall-time estimates used by the simulator: measured anchors at 1ms
// link latency, held to the next anchor between entries (a conservative
// ceiling), scaled by per-latency factors. Sizes past the last anchor never
// finished within the measurement cutoff and count as infeasible.
struct RuntimeModel {
  std::vector<std::pair<int, double>> anchors_1ms;  // (pool size, hours), ascending
  std::map<int, double> latency_factors;            // latency ms -> multiplier

  static RuntimeModel defaults();
  static RuntimeModel from_json_file(const std::string& path);

  void validate() const;

  // hours for one protocol execution; throws InfeasibleSizeError past the
  // last anchor and ConfigError for latencies without a factor
  double runtime_hours(int latency_ms, int pool_size) const;

  bool feasible(int latency_ms, int pool_size) const;

  // largest pool size whose runtime is strictly below the budget; 0 if none
  int max_feasible(int latency_ms, double budget_hours) const;
};

// Minimum number of balanced sub-pools with every size <= cap; sizes differ
// by at most one. Empty for an empty pool, throws when cap < 1.
std::vector<int> split_sizes(int pool_size, int cap);

}  // namespace kex

#include "kex/runtime_model.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "kex/errors.hpp"

namespace kex {

RuntimeModel RuntimeModel::defaults() {
  RuntimeModel m;
  m.anchors_1ms = {
      {5, 1.0 / 60.0},  // under a minute
      {20, 1.5},
      {40, 30.0},
      {60, 127.0},
      {64, 168.0},  // measurement cutoff, one week
  };
  m.latency_factors = {{1, 1.0}, {5, 4.66}, {10, 9.22}};
  return m;
}

RuntimeModel RuntimeModel::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("runtime model: cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("runtime model: bad json in " + path + ": " + e.what());
  }

  RuntimeModel m;
  try {
    for (const auto& row : doc.at("anchors_1ms")) {
      m.anchors_1ms.emplace_back(row.at(0).get<int>(), row.at(1).get<double>());
    }
    for (const auto& [key, value] : doc.at("latency_factors").items()) {
      m.latency_factors[std::stoi(key)] = value.get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("runtime model: bad schema in " + path + ": " + e.what());
  }
  m.validate();
  return m;
}

void RuntimeModel::validate() const {
  if (anchors_1ms.empty()) throw ConfigError("runtime model: no anchors");
  int prev_size = 0;
  double prev_hours = 0.0;
  for (const auto& [size, hours] : anchors_1ms) {
    if (size <= prev_size)
      throw ConfigError("runtime model: anchor sizes not strictly increasing");
    if (hours < prev_hours)
      throw ConfigError("runtime model: runtime decreases with pool size");
    if (!std::isfinite(hours) || hours <= 0.0)
      throw ConfigError("runtime model: non-positive runtime anchor");
    prev_size = size;
    prev_hours = hours;
  }
  if (latency_factors.empty()) throw ConfigError("runtime model: no latency factors");
  for (const auto& [ms, factor] : latency_factors) {
    if (ms <= 0) throw ConfigError("runtime model: non-positive latency");
    if (!std::isfinite(factor) || factor <= 0.0)
      throw ConfigError("runtime model: non-positive latency factor");
  }
}

double RuntimeModel::runtime_hours(int latency_ms, int pool_size) const {
  auto it = latency_factors.find(latency_ms);
  if (it == latency_factors.end())
    throw ConfigError("runtime model: no factor for latency " +
                      std::to_string(latency_ms) + "ms");
  if (pool_size < 1) throw ConfigError("runtime model: pool size must be positive");
  for (const auto& [size, hours] : anchors_1ms) {
    if (pool_size <= size) return hours * it->second;
  }
  throw InfeasibleSizeError("runtime model: pool of " + std::to_string(pool_size) +
                            " exceeds the largest measured size " +
                            std::to_string(anchors_1ms.back().first));
}

bool RuntimeModel::feasible(int latency_ms, int pool_size) const {
  if (latency_factors.find(latency_ms) == latency_factors.end())
    throw ConfigError("runtime model: no factor for latency " +
                      std::to_string(latency_ms) + "ms");
  return pool_size >= 1 && pool_size <= anchors_1ms.back().first;
}

int RuntimeModel::max_feasible(int latency_ms, double budget_hours) const {
  int best = 0;
  for (int size = 1; size <= anchors_1ms.back().first; ++size) {
    if (runtime_hours(latency_ms, size) < budget_hours) best = size;
  }
  return best;
}

std::vector<int> split_sizes(int pool_size, int cap) {
  if (pool_size < 0) throw ConfigError("split: negative pool size");
  if (pool_size == 0) return {};
  if (cap < 1)
    throw InfeasibleSizeError("split: no sub-pool size fits the match interval");
  int k = (pool_size + cap - 1) / cap;
  int base = pool_size / k;
  int extra = pool_size % k;
  std::vector<int> sizes;
  sizes.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) sizes.push_back(base + (i < extra ? 1 : 0));
  return sizes;
}

}  // namespace kex

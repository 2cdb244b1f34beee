#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "kex/errors.hpp"
#include "kex/runtime_model.hpp"

using namespace kex;

TEST_CASE("step-hold lookup at 1ms") {
  auto m = RuntimeModel::defaults();
  m.validate();

  CHECK(m.runtime_hours(1, 1) == doctest::Approx(1.0 / 60.0));
  CHECK(m.runtime_hours(1, 5) == doctest::Approx(1.0 / 60.0));
  CHECK(m.runtime_hours(1, 6) == doctest::Approx(1.5));
  CHECK(m.runtime_hours(1, 20) == doctest::Approx(1.5));
  CHECK(m.runtime_hours(1, 21) == doctest::Approx(30.0));
  CHECK(m.runtime_hours(1, 40) == doctest::Approx(30.0));
  CHECK(m.runtime_hours(1, 41) == doctest::Approx(127.0));
  CHECK(m.runtime_hours(1, 60) == doctest::Approx(127.0));
  CHECK(m.runtime_hours(1, 61) == doctest::Approx(168.0));
  CHECK(m.runtime_hours(1, 64) == doctest::Approx(168.0));

  CHECK_THROWS_AS(m.runtime_hours(1, 65), InfeasibleSizeError);
  CHECK_THROWS_AS(m.runtime_hours(1, 1000), InfeasibleSizeError);
  CHECK_THROWS_AS(m.runtime_hours(1, 0), ConfigError);
  CHECK_THROWS_AS(m.runtime_hours(3, 5), ConfigError);

  CHECK(m.feasible(1, 64));
  CHECK_FALSE(m.feasible(1, 65));
  CHECK_FALSE(m.feasible(10, 0));
  CHECK_THROWS_AS(m.feasible(2, 5), ConfigError);
}

TEST_CASE("latency factors scale the 1ms column") {
  auto m = RuntimeModel::defaults();
  CHECK(m.runtime_hours(5, 40) == doctest::Approx(30.0 * 4.66));
  CHECK(m.runtime_hours(10, 40) == doctest::Approx(30.0 * 9.22));
  CHECK(m.runtime_hours(10, 5) == doctest::Approx(9.22 / 60.0));
  CHECK(m.runtime_hours(5, 64) == doctest::Approx(168.0 * 4.66));
}

TEST_CASE("runtime is monotone nondecreasing in pool size") {
  auto m = RuntimeModel::defaults();
  for (int latency : {1, 5, 10}) {
    double prev = 0.0;
    for (int size = 1; size <= 64; ++size) {
      double h = m.runtime_hours(latency, size);
      CHECK(h >= prev);
      prev = h;
    }
  }
}

TEST_CASE("max_feasible picks the largest size under the budget") {
  auto m = RuntimeModel::defaults();
  // one week: the 61..64 step sits exactly at the budget and is excluded
  CHECK(m.max_feasible(1, 168.0) == 60);
  CHECK(m.max_feasible(1, 24.0) == 20);
  CHECK(m.max_feasible(1, 1.5) == 5);
  CHECK(m.max_feasible(1, 2.0) == 20);
  CHECK(m.max_feasible(1, 1.0 / 120.0) == 0);
  CHECK(m.max_feasible(1, 1e9) == 64);
  CHECK(m.max_feasible(10, 24.0) == 20);    // 13.83h at 20, 276.6h at 21
  CHECK(m.max_feasible(10, 13.0) == 5);
  CHECK(m.max_feasible(5, 127.0 * 4.66) == 40);  // boundary is excluded
  CHECK(m.max_feasible(5, 127.0 * 4.66 + 1e-6) == 60);
}

TEST_CASE("balanced splits") {
  CHECK(split_sizes(0, 20).empty());
  CHECK(split_sizes(20, 20) == std::vector<int>{20});
  CHECK(split_sizes(21, 20) == std::vector<int>{11, 10});
  CHECK(split_sizes(45, 20) == std::vector<int>{15, 15, 15});
  CHECK(split_sizes(41, 20) == std::vector<int>{14, 14, 13});
  CHECK(split_sizes(7, 1) == std::vector<int>(7, 1));
  CHECK_THROWS_AS(split_sizes(5, 0), InfeasibleSizeError);
  CHECK_THROWS_AS(split_sizes(-1, 20), ConfigError);

  for (int pool = 1; pool <= 200; ++pool) {
    for (int cap : {1, 3, 5, 20, 40, 60}) {
      auto sizes = split_sizes(pool, cap);
      int total = 0, lo = pool, hi = 0;
      for (int s : sizes) {
        total += s;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      CHECK(total == pool);
      CHECK(hi <= cap);
      CHECK(hi - lo <= 1);
      // minimality: one pool fewer would overflow the cap
      if (sizes.size() > 1) {
        int k = static_cast<int>(sizes.size()) - 1;
        CHECK((pool + k - 1) / k > cap);
      }
    }
  }
}

TEST_CASE("calibration file matches the built-in defaults") {
  auto file = RuntimeModel::from_json_file(std::string(KEX_DATA_DIR) +
                                           "/runtime_calibration.json");
  auto def = RuntimeModel::defaults();
  REQUIRE(file.anchors_1ms.size() == def.anchors_1ms.size());
  for (size_t i = 0; i < def.anchors_1ms.size(); ++i) {
    CHECK(file.anchors_1ms[i].first == def.anchors_1ms[i].first);
    CHECK(file.anchors_1ms[i].second == doctest::Approx(def.anchors_1ms[i].second));
  }
  REQUIRE(file.latency_factors.size() == def.latency_factors.size());
  for (const auto& [ms, factor] : def.latency_factors) {
    REQUIRE(file.latency_factors.count(ms) == 1);
    CHECK(file.latency_factors.at(ms) == doctest::Approx(factor));
  }
  // prose anchors live in the file: a 5-pair run takes at most a minute,
  // a 60-pair run 127 hours, both at 1ms
  CHECK(file.runtime_hours(1, 5) <= 1.0 / 60.0 + 1e-12);
  CHECK(file.runtime_hours(1, 60) == doctest::Approx(127.0));
}

TEST_CASE("validation rejects broken tables") {
  auto good = RuntimeModel::defaults();

  auto m = good;
  m.anchors_1ms.clear();
  CHECK_THROWS_AS(m.validate(), ConfigError);

  m = good;
  m.anchors_1ms[1].first = 5;  // duplicate size
  CHECK_THROWS_AS(m.validate(), ConfigError);

  m = good;
  m.anchors_1ms[2].second = 0.1;  // dips below the previous anchor
  CHECK_THROWS_AS(m.validate(), ConfigError);

  m = good;
  m.anchors_1ms[0].second = -1.0;
  CHECK_THROWS_AS(m.validate(), ConfigError);

  m = good;
  m.latency_factors.clear();
  CHECK_THROWS_AS(m.validate(), ConfigError);

  m = good;
  m.latency_factors[5] = 0.0;
  CHECK_THROWS_AS(m.validate(), ConfigError);

  m = good;
  m.latency_factors[-2] = 1.0;
  CHECK_THROWS_AS(m.validate(), ConfigError);
}

TEST_CASE("file errors surface as config errors") {
  CHECK_THROWS_AS(RuntimeModel::from_json_file("/nonexistent/cal.json"), ConfigError);

  const char* path = "bad_cal.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(RuntimeModel::from_json_file(path), ConfigError);
  {
    std::ofstream out(path);
    out << "{\"anchors_1ms\": [[5, \"fast\"]], \"latency_factors\": {\"1\": 1.0}}";
  }
  CHECK_THROWS_AS(RuntimeModel::from_json_file(path), ConfigError);
  {
    std::ofstream out(path);
    out << "{\"anchors_1ms\": [[20, 1.5], [5, 0.1]], \"latency_factors\": {\"1\": 1.0}}";
  }
  CHECK_THROWS_AS(RuntimeModel::from_json_file(path), ConfigError);
  std::remove(path);
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cascade/data_io.hpp"
#include "cascade/engine.hpp"
#include "cascade/reporting.hpp"

namespace cascade {

struct ScenarioSpec {
  std::string label;
  std::string group;
  ForecastMode daa;
  ForecastMode ida;
  ForecastMode idc;
  std::optional<double> sigma;
  std::optional<std::uint64_t> seed;
};

// Perfect foresight, then file DAA forecast and file DAA + IDA forecasts when
// the data has them, then one noisy ID1 run per sigma and seed on top of the
// most realistic auction forecasts available.
std::vector<ScenarioSpec> build_scenario_ladder(const MarketData& data,
                                                const std::vector<double>& sigmas,
                                                const std::vector<std::uint64_t>& seeds);

struct SweepOptions {
  std::vector<double> sigmas;
  std::vector<std::uint64_t> seeds{0};
  unsigned threads = 1;  // scenarios run concurrently, each one sequentially
};

// Results come back in ladder order whatever the thread count.
std::vector<ScenarioResult> run_sweep(const BacktestConfig& base, const MarketData& data,
                                      const SweepOptions& options);

}  // namespace cascade

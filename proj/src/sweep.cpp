#include "cascade/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "cascade/error.hpp"

namespace cascade {

namespace {

std::string percent(double sigma) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, sigma * 100.0);
  return std::string(buf, res.ptr) + "%";
}

}  // namespace

std::vector<ScenarioSpec> build_scenario_ladder(const MarketData& data,
                                                const std::vector<double>& sigmas,
                                                const std::vector<std::uint64_t>& seeds) {
  std::vector<ScenarioSpec> ladder;
  ladder.push_back({"PF", "PF", ForecastMode::perfect(), ForecastMode::perfect(),
                    ForecastMode::perfect(), std::nullopt, std::nullopt});
  ForecastMode daa = ForecastMode::perfect();
  ForecastMode ida = ForecastMode::perfect();
  if (data.daa_forecast) {
    daa = ForecastMode::from_file();
    ladder.push_back({"DAA forecast", "DAA forecast", daa, ida, ForecastMode::perfect(),
                      std::nullopt, std::nullopt});
    if (data.ida_forecast) {
      ida = ForecastMode::from_file();
      ladder.push_back({"DAA+IDA forecast", "DAA+IDA forecast", daa, ida,
                        ForecastMode::perfect(), std::nullopt, std::nullopt});
    }
  }
  if (!sigmas.empty() && seeds.empty()) throw ConfigError("noisy scenarios need at least one seed");
  for (const double sigma : sigmas) {
    if (!(sigma >= 0.0)) throw ConfigError("sigma values must be >= 0");
    const std::string group = "ID1 sigma=" + percent(sigma);
    for (const auto seed : seeds) {
      ladder.push_back({group + " seed=" + std::to_string(seed), group, daa, ida,
                        ForecastMode::noisy(sigma, seed), sigma, seed});
    }
  }
  return ladder;
}

std::vector<ScenarioResult> run_sweep(const BacktestConfig& base, const MarketData& data,
                                      const SweepOptions& options) {
  base.validate();
  const auto ladder = build_scenario_ladder(data, options.sigmas, options.seeds);

  // The auction stages depend only on the DAA and IDA forecast modes, so each
  // distinct pair is run once and shared by the scenarios that use it.
  using Key = std::pair<int, int>;
  std::map<Key, Portfolio> auctions;
  for (const auto& s : ladder) {
    const Key key{static_cast<int>(s.daa.kind), static_cast<int>(s.ida.kind)};
    if (auctions.count(key)) continue;
    BacktestConfig config = base;
    config.daa = s.daa;
    config.ida = s.ida;
    auctions.emplace(key, run_auctions(config, data));
  }

  std::vector<ScenarioResult> results(ladder.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= ladder.size()) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      const auto& s = ladder[i];
      try {
        BacktestConfig config = base;
        config.daa = s.daa;
        config.ida = s.ida;
        config.idc = s.idc;
        const Key key{static_cast<int>(s.daa.kind), static_cast<int>(s.ida.kind)};
        const Portfolio done = run_continuous(config, data, auctions.at(key));
        results[i] = scenario_result(s.label, s.group, done);
        results[i].sigma = s.sigma;
        results[i].seed = s.seed;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads,
                                                           static_cast<unsigned>(ladder.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace cascade

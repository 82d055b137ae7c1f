// Acceptance checks for the cascade backtester. Prints one line per
// criterion and exits non-zero when any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cascade/data_io.hpp"
#include "cascade/engine.hpp"
#include "cascade/milp.hpp"
#include "cascade/strategies.hpp"
#include "cascade/sweep.hpp"
#include "support/dp_oracle.hpp"
#include "support/synthetic.hpp"

namespace {

using namespace cascade;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

BacktestConfig config_for(const MarketData& data) {
  BacktestConfig c;
  c.timeline = data.timeline;
  return c;
}

// Random day-ahead instances against the dynamic-programming optimum.
Outcome daa_matches_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> price(-100, 100);
  std::uniform_int_distribution<int> hours(1, 6);
  std::uniform_int_distribution<int> size(1, 8);
  double worst = 0.0;
  int failed = 0;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    BatteryParams p;
    p.p_max = 2.0;
    p.e_max = 2.0 * size(rng) / 4.0;
    p.eta_ch = p.eta_dis = i % 2 == 0 ? 1.0 : 0.95;
    p.gamma_month = 0.0;
    p.n_cyc = 24.0 * p.p_max / p.e_max + 1.0;
    p.e_init = 0.0;
    std::vector<double> prices(static_cast<std::size_t>(hours(rng)));
    for (auto& c : prices) c = price(rng);
    const auto sp = build_daa(p, Forecast{MarketSegment::Daa, prices});
    const auto s = milp::solve(sp.problem);
    if (!s.optimal()) {
      ++failed;
      continue;
    }
    const double gap =
        std::abs(s.objective_value - testing::dp_schedule_optimum(prices, p, p.p_max / 380.0));
    worst = std::max(worst, gap);
    if (gap > 1e-6) ++failed;
  }
  const double secs = seconds_since(t0);
  return {failed == 0 && secs < 60.0,
          std::to_string(n - failed) + "/" + std::to_string(n) +
              fmt(" instances match, worst gap %.2e EUR, %.1f s", worst, secs)};
}

// Every optimisation of several backtests passes the solver-independent
// feasibility check and the strategy audit.
Outcome every_solve_is_audited() {
  std::size_t solves = 0, findings = 0;
  std::string first;
  RunOptions options;
  BatteryParams params;
  options.observer = [&](const TradingEvent&, const StrategyProblem& sp,
                         const milp::Solution& s) {
    ++solves;
    const auto v = milp::check_solution(sp.problem, s);
    const auto a = audit_strategy_solution(sp, s, params);
    findings += v.size() + a.size();
    if (first.empty() && !v.empty()) first = v.front().what;
    if (first.empty() && !a.empty()) first = a.front();
  };
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto data = testing::synthetic_market(2, seed);
    auto config = config_for(data);
    params = config.battery;
    run_backtest(config, data, options);
    config.idc = ForecastMode::noisy(0.3, seed);
    run_backtest(config, data, options);
  }
  return {findings == 0 && solves > 0,
          std::to_string(solves) + " solves audited, " + std::to_string(findings) + " findings" +
              (first.empty() ? "" : " (first: " + first + ")")};
}

// Under perfect foresight the later markets never lose money.
Outcome perfect_foresight_never_loses() {
  int bad = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 100; seed < 150; ++seed) {
    const auto data = testing::synthetic_market(1, seed);
    const auto p = run_backtest(config_for(data), data);
    const double ida = p.cash(MarketSegment::Ida);
    const double idc = p.cash(MarketSegment::Idc);
    const double excess = p.revenue_total - p.cash(MarketSegment::Daa);
    worst = std::min({worst, ida, idc, excess});
    if (ida < -1e-6 || idc < -1e-6 || excess < -1e-6) ++bad;
  }
  return {bad == 0, std::to_string(50 - bad) + "/50 days, lowest incremental cash " +
                        fmt("%.3g EUR", worst)};
}

// Flat prices with round-trip losses give no reason to trade.
Outcome flat_prices_no_trades() {
  const auto data = testing::flat_market(48, 73.0);
  auto config = config_for(data);
  config.battery.eta_ch = config.battery.eta_dis = 0.95;
  const auto p = run_backtest(config, data);
  return {p.trades.empty() && std::abs(p.revenue_total) < 1e-9,
          std::to_string(p.trades.size()) + " trades" + fmt(", revenue %.3g EUR", p.revenue_total)};
}

// Opening and closing the same continuous quarter nets to zero cash.
Outcome churn_is_neutral() {
  double worst = 0.0;

  const auto data = testing::synthetic_market(1, 7);
  Signals open;
  open.segment = MarketSegment::Idc;
  open.window_begin = 30;
  open.new_charge = {0.0, 1.7};
  open.new_dis = {0.0, 0.0};
  open.close_charge = {0.0, 0.0};
  open.close_dis = {0.0, 0.0};
  Signals close = open;
  close.window_begin = 31;
  close.new_charge = {0.0};
  close.new_dis = {0.0};
  close.close_charge = {0.0};
  close.close_dis = {1.7};  // sells back the earlier buy
  const auto a = settle(open, data.id1_actual, 30);
  const auto b = settle(close, data.id1_actual, 31);
  worst = std::max(worst, std::abs(a.cash + b.cash));

  // In a noisy run, buys and sells of one quarter settle at the same price,
  // so only the net volume carries cash.
  std::size_t quarters_with_both = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto d = testing::synthetic_market(2, seed);
    auto config = config_for(d);
    config.idc = ForecastMode::noisy(0.5, seed);
    const auto p = run_backtest(config, d);
    std::map<std::size_t, std::array<double, 3>> per_q;  // buy, sell, cash
    for (const auto& t : p.trades) {
      if (t.segment != MarketSegment::Idc) continue;
      if (t.price != d.id1_actual[t.delivery_index]) return {false, "IDC trade off the ID1 price"};
      auto& e = per_q[t.delivery_index];
      (t.side == Side::Buy ? e[0] : e[1]) += t.volume;
      e[2] += t.cash();
    }
    for (const auto& [q, e] : per_q) {
      if (e[0] > 0 && e[1] > 0) ++quarters_with_both;
      const double net_cash = d.id1_actual[q] * (e[1] - e[0]);
      worst = std::max(worst, std::abs(e[2] - net_cash));
    }
  }
  return {worst <= 1e-9, fmt("largest paired residual %.2e EUR", worst) + ", " +
                             std::to_string(quarters_with_both) + " quarters traded both ways"};
}

// Forecast noise on the continuous market erodes revenue.
Outcome noise_sensitivity() {
  const auto t0 = Clock::now();
  const auto data = testing::synthetic_market(30, 42);
  SweepOptions options;
  options.sigmas = {0.1, 0.2, 0.5, 1.0};
  options.seeds.clear();
  for (std::uint64_t s = 1; s <= 20; ++s) options.seeds.push_back(s);
  options.threads = 1;
  const auto rows = run_sweep(config_for(data), data, options);
  const auto report = sensitivity_report(rows);
  std::vector<double> med;
  std::string detail = "medians";
  for (const auto& g : report.medians) {
    med.push_back(g.total);
    detail += " " + g.group + "=" + fmt("%.0f", g.total);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < med.size(); ++i) monotone = monotone && med[i] <= med[i - 1] + 1e-6;
  const bool drop = med.back() <= 0.7 * med.front();
  const double secs = seconds_since(t0);
  return {monotone && drop && secs <= 1800.0,
          detail + fmt("; sigma=100%% at %.0f%% of perfect; %.0f runs in %.0f s",
                       100.0 * med.back() / med.front(), static_cast<double>(rows.size()), secs)};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), a));
  }
  std::size_t count_b = 0;
  for (const auto& e : fs::recursive_directory_iterator(b)) count_b += e.is_regular_file();
  if (files.empty() || count_b != files.size()) {
    why = "file sets differ";
    return false;
  }
  for (const auto& f : files) {
    if (read_file(a / f) != read_file(b / f)) {
      why = f.string() + " differs";
      return false;
    }
  }
  return true;
}

// The command-line runs are byte-for-byte reproducible.
Outcome cli_is_deterministic() {
  const fs::path root = fs::temp_directory_path() / "cascade_acceptance_cli";
  fs::remove_all(root);
  const std::string cli = CLI_PATH;
  const std::string data = std::string(SAMPLE_DIR) + "/prices_1day.csv";
  const std::string cfg = std::string(SAMPLE_DIR) + "/case_study.cfg";
  std::size_t files = 0;
  for (int k = 0; k < 2; ++k) {
    const auto dir = root / std::to_string(k);
    const std::string run = "\"" + cli + "\" run --config \"" + cfg + "\" --data \"" + data +
                            "\" --sigma 0.3 --seed 5 --out \"" + (dir / "run").string() +
                            "\" > /dev/null";
    const std::string sweep = "\"" + cli + "\" sweep --config \"" + cfg + "\" --data \"" + data +
                              "\" --sigma 0.1,0.5 --seed 1,2,3 --threads 2 --out \"" +
                              (dir / "sweep").string() + "\" > /dev/null";
    if (std::system(run.c_str()) != 0 || std::system(sweep.c_str()) != 0) {
      return {false, "CLI invocation failed"};
    }
  }
  std::string why;
  const bool ok = same_tree(root / "0", root / "1", why);
  for (const auto& e : fs::recursive_directory_iterator(root / "0")) files += e.is_regular_file();
  fs::remove_all(root);
  return {ok, ok ? std::to_string(files) + " report files identical across two runs" : why};
}

// A month of quarter-hourly trading completes in reasonable time.
Outcome month_runtime() {
  const auto data = testing::synthetic_market(30, 77);
  const auto t0 = Clock::now();
  const auto p = run_backtest(config_for(data), data);
  const double secs = seconds_since(t0);
  return {secs <= 600.0, fmt("30 days (%.0f quarters) in %.1f s, revenue %.0f EUR",
                             static_cast<double>(data.timeline.quarters()), secs,
                             p.revenue_total)};
}

// Forecast error metrics on known inputs.
Outcome error_metrics() {
  const std::vector<double> a = {12.0, -3.0, 40.5, 7.0};
  std::vector<double> shifted = a;
  for (auto& v : shifted) v += 5.0;
  const std::vector<double> zeros = {0.0, 0.0};
  const std::vector<double> f = {3.0, -4.0};
  const bool ok = mae(a, a) == 0.0 && rmse(a, a) == 0.0 && std::abs(mae(shifted, a) - 5.0) < 1e-12 &&
                  std::abs(rmse(shifted, a) - 5.0) < 1e-12 && std::abs(mae(f, zeros) - 3.5) < 1e-12 &&
                  std::abs(rmse(f, zeros) - std::sqrt(12.5)) < 1e-12;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 50.0);
  bool ordered = true;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> x(10), y(10);
    for (std::size_t k = 0; k < 10; ++k) {
      x[k] = n(rng);
      y[k] = n(rng);
    }
    ordered = ordered && rmse(x, y) >= mae(x, y) - 1e-12;
  }
  return {ok && ordered, fmt("MAE %.4g, RMSE %.6g on [3,-4] vs 0", mae(f, zeros), rmse(f, zeros))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"day-ahead optimum matches dynamic programming", daa_matches_oracle},
      {"every solve passes feasibility and strategy audit", every_solve_is_audited},
      {"perfect foresight intraday stages never lose", perfect_foresight_never_loses},
      {"flat prices produce no trades", flat_prices_no_trades},
      {"open and close in one quarter is cash neutral", churn_is_neutral},
      {"revenue falls with ID1 forecast noise", noise_sensitivity},
      {"CLI output is deterministic", cli_is_deterministic},
      {"one month runs within ten minutes", month_runtime},
      {"forecast error metrics", error_metrics},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %zu: %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

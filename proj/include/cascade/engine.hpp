#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cascade/battery.hpp"
#include "cascade/data_io.hpp"
#include "cascade/milp.hpp"
#include "cascade/strategies.hpp"
#include "cascade/timeline.hpp"

namespace cascade {

struct ForecastMode {
  enum class Kind { Perfect, FromFile, NoisyId1 };

  Kind kind = Kind::Perfect;
  double sigma = 0.0;
  std::uint64_t seed = 0;

  static ForecastMode perfect() { return {}; }
  static ForecastMode from_file() { return {Kind::FromFile, 0.0, 0}; }
  static ForecastMode noisy(double sigma, std::uint64_t seed) {
    return {Kind::NoisyId1, sigma, seed};
  }
};

struct BacktestConfig {
  BatteryParams battery;
  Timeline timeline;
  std::size_t n_p = kQuartersPerDay;
  ForecastMode daa;
  ForecastMode ida;
  ForecastMode idc;

  // Throws ConfigError. Noisy forecasts are only defined for the ID1 index.
  void validate() const;
};

enum class Side { Buy, Sell };

struct Trade {
  MarketSegment segment = MarketSegment::Daa;
  std::size_t delivery_index = 0;  // hour for DAA, quarter otherwise
  Side side = Side::Buy;
  double volume = 0.0;  // MWh
  double price = 0.0;   // EUR/MWh, actual settlement price
  std::size_t booked_at = 0;

  // Sells earn, buys pay.
  double cash() const noexcept { return side == Side::Sell ? volume * price : -volume * price; }
};

struct Portfolio {
  std::vector<Trade> trades;
  std::array<double, kSegmentCount> cash_by_segment{};
  PositionBook position_book;
  SocTrajectory soc_trajectory;  // Q + 1 values on the quarter grid
  double revenue_total = 0.0;
  // Net bought power per quarter and segment (MW); DAA spread over quarters.
  std::array<std::vector<double>, kSegmentCount> net_by_segment;

  double cash(MarketSegment s) const { return cash_by_segment[index_of(s)]; }
};

struct Settlement {
  std::vector<Trade> trades;
  double cash = 0.0;
};

// Books the signals as trades at the actual prices of their delivery periods.
// `actual_prices` is the full series of the segment, indexed by delivery period.
Settlement settle(const Signals& signals, std::span<const double> actual_prices,
                  std::size_t booked_at);

// New trades add to their own side; closing buys reduce the sell position and
// closing sells the buy position. Throws BookkeepingError when a close
// exceeds the position it closes.
PositionBook apply_trades_to_book(PositionBook book, const Signals& signals);

// SOC at the start of quarter upto_q after delivering the book from e_init.
double physical_soc_at(const PositionBook& book, const BatteryParams& params, std::size_t upto_q);
SocTrajectory physical_soc_trajectory(const PositionBook& book, const BatteryParams& params);

// Called after every optimisation with the event, the problem and its solution.
using SolveObserver =
    std::function<void(const TradingEvent&, const StrategyProblem&, const milp::Solution&)>;

struct RunOptions {
  SolveObserver observer;
};

// DAA and IDA stages only; the returned portfolio is the starting point of
// the continuous stage.
Portfolio run_auctions(const BacktestConfig& config, const MarketData& data,
                       const RunOptions& options = {});

// Rolling IDC stage on top of an auction portfolio.
Portfolio run_continuous(const BacktestConfig& config, const MarketData& data,
                         Portfolio portfolio, const RunOptions& options = {});

Portfolio run_backtest(const BacktestConfig& config, const MarketData& data,
                       const RunOptions& options = {});

// The forecast an event optimises against.
Forecast event_forecast(const BacktestConfig& config, const MarketData& data,
                        const TradingEvent& event);

// Builds the optimisation an event would solve given the portfolio so far.
StrategyProblem build_event_problem(const BacktestConfig& config, const MarketData& data,
                                    const TradingEvent& event, const Portfolio& portfolio);

}  // namespace cascade

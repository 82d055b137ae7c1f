#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "cascade/engine.hpp"
#include "cascade/error.hpp"
#include "support/dp_oracle.hpp"
#include "support/synthetic.hpp"

namespace cascade {
namespace {

Signals quarter_signals(MarketSegment seg, std::size_t begin, std::size_t n) {
  Signals s;
  s.segment = seg;
  s.window_begin = begin;
  s.new_charge.assign(n, 0.0);
  s.new_dis.assign(n, 0.0);
  s.close_charge.assign(n, 0.0);
  s.close_dis.assign(n, 0.0);
  return s;
}

BacktestConfig config_for(const MarketData& data) {
  BacktestConfig c;
  c.timeline = data.timeline;
  return c;
}

TEST(Settle, BuyOneMegawattHour) {
  Signals s;
  s.segment = MarketSegment::Daa;
  s.new_charge = {1.0};
  s.new_dis = {0.0};
  const std::vector<double> prices = {50.0};
  const auto r = settle(s, prices, 0);
  ASSERT_EQ(r.trades.size(), 1u);
  EXPECT_EQ(r.trades[0].side, Side::Buy);
  EXPECT_EQ(r.trades[0].volume, 1.0);
  EXPECT_EQ(r.cash, -50.0);
}

TEST(Settle, SellAQuarterHour) {
  auto s = quarter_signals(MarketSegment::Ida, 0, 1);
  s.new_dis[0] = 1.0;
  const std::vector<double> prices = {200.0};
  const auto r = settle(s, prices, 0);
  ASSERT_EQ(r.trades.size(), 1u);
  EXPECT_EQ(r.trades[0].volume, 0.25);
  EXPECT_EQ(r.cash, 50.0);
}

TEST(Settle, CloseAndReopenAtTheSamePriceNetsToZero) {
  auto s = quarter_signals(MarketSegment::Idc, 3, 1);
  s.close_charge[0] = 4.0;
  s.new_dis[0] = 4.0;
  const std::vector<double> prices = {0, 0, 0, 87.3, 0};
  const auto r = settle(s, prices, 2);
  EXPECT_EQ(r.trades.size(), 2u);
  EXPECT_EQ(r.cash, 0.0);
  for (const auto& t : r.trades) {
    EXPECT_EQ(t.delivery_index, 3u);
    EXPECT_EQ(t.booked_at, 2u);
    EXPECT_EQ(t.price, 87.3);
  }
}

TEST(Settle, PricesMustCoverTheWindow) {
  auto s = quarter_signals(MarketSegment::Idc, 3, 2);
  const std::vector<double> prices = {1, 2, 3, 4};
  EXPECT_THROW(settle(s, prices, 0), IndexError);
}

TEST(ApplyTrades, ClosingBuyReducesTheSale) {
  PositionBook book(8);
  book.discharge[5] = 1.0;
  auto s = quarter_signals(MarketSegment::Idc, 0, 8);
  s.close_charge[5] = 1.0;
  const auto out = apply_trades_to_book(book, s);
  EXPECT_EQ(out.discharge[5], 0.0);
  EXPECT_EQ(out.charge[5], 0.0);
}

TEST(ApplyTrades, NewBuyAddsToCharge) {
  auto s = quarter_signals(MarketSegment::Ida, 0, 8);
  s.new_charge[3] = 0.5;
  const auto out = apply_trades_to_book(PositionBook(8), s);
  EXPECT_EQ(out.charge[3], 0.5);
}

TEST(ApplyTrades, PartialCloseAndNewBuy) {
  PositionBook book(4);
  book.discharge[2] = 1.0;
  auto s = quarter_signals(MarketSegment::Idc, 2, 1);
  s.close_charge[0] = 0.4;
  s.new_charge[0] = 0.4;
  const auto out = apply_trades_to_book(book, s);
  EXPECT_NEAR(out.discharge[2], 0.6, 1e-12);
  EXPECT_NEAR(out.charge[2], 0.4, 1e-12);
}

TEST(ApplyTrades, OverClosingIsABookkeepingError) {
  PositionBook book(4);
  book.charge[1] = 0.5;
  auto s = quarter_signals(MarketSegment::Idc, 0, 4);
  s.close_dis[1] = 0.6;
  EXPECT_THROW(apply_trades_to_book(book, s), BookkeepingError);
}

TEST(ApplyTrades, RoundingNoiseIsClampedToZero) {
  PositionBook book(4);
  book.charge[1] = 0.5;
  auto s = quarter_signals(MarketSegment::Idc, 0, 4);
  s.close_dis[1] = 0.5 + 1e-10;
  EXPECT_EQ(apply_trades_to_book(book, s).charge[1], 0.0);
}

TEST(PhysicalSoc, EmptyBookStaysAtZero) {
  const BatteryParams p;
  PositionBook book(16);
  for (std::size_t q = 0; q <= 16; ++q) EXPECT_EQ(physical_soc_at(book, p, q), 0.0);
}

TEST(PhysicalSoc, OneHourOfCharging) {
  BatteryParams p;
  p.gamma_month = 0.0;
  p.p_max = 1.0;
  p.eta_ch = 1.0;
  PositionBook book(8);
  for (std::size_t q = 0; q < 4; ++q) book.charge[q] = 1.0;
  EXPECT_NEAR(physical_soc_at(book, p, 4), 1.0, 1e-12);
  p.eta_ch = 0.95;
  EXPECT_NEAR(physical_soc_at(book, p, 4), 0.95, 1e-12);
  EXPECT_THROW(physical_soc_at(book, p, 9), IndexError);
}

TEST(PhysicalSoc, TrajectoryAgreesWithPointQueries) {
  const BatteryParams p;
  PositionBook book(12);
  book.charge[1] = 3.0;
  book.discharge[7] = 2.0;
  const auto t = physical_soc_trajectory(book, p);
  ASSERT_EQ(t.values.size(), 13u);
  for (std::size_t q = 0; q <= 12; ++q) EXPECT_EQ(t.values[q], physical_soc_at(book, p, q));
}

TEST(Backtest, FlatPricesNeverTrade) {
  const auto data = testing::flat_market(24, 63.0);
  const auto out = run_backtest(config_for(data), data);
  EXPECT_TRUE(out.trades.empty());
  EXPECT_EQ(out.revenue_total, 0.0);
}

TEST(Backtest, CashIsRecomputableFromTheTradeLog) {
  const auto data = testing::synthetic_market(1, 5);
  const auto out = run_backtest(config_for(data), data);
  std::array<double, 3> cash{};
  for (const auto& t : out.trades) {
    EXPECT_GT(t.volume, 0.0);
    EXPECT_EQ(t.price, data.actual(t.segment)[t.delivery_index]);
    cash[index_of(t.segment)] += t.cash();
  }
  for (std::size_t s = 0; s < 3; ++s) EXPECT_NEAR(cash[s], out.cash_by_segment[s], 1e-9);
  EXPECT_NEAR(out.revenue_total, cash[0] + cash[1] + cash[2], 1e-9);
  EXPECT_GT(out.revenue_total, 0.0);
}

TEST(Backtest, SocTrajectoryIsPhysical) {
  const auto data = testing::synthetic_market(2, 8);
  const auto config = config_for(data);
  const auto out = run_backtest(config, data);
  ASSERT_EQ(out.soc_trajectory.values.size(), data.timeline.quarters() + 1);
  EXPECT_EQ(out.soc_trajectory.values.front(), config.battery.e_init);
  for (const double e : out.soc_trajectory.values) {
    EXPECT_GE(e, -1e-6);
    EXPECT_LE(e, config.battery.e_max + 1e-6);
  }
  const auto again = physical_soc_trajectory(out.position_book, config.battery);
  EXPECT_EQ(again.values, out.soc_trajectory.values);
  for (std::size_t q = 0; q < data.timeline.quarters(); ++q) {
    double net = 0.0;
    for (const auto& seg : out.net_by_segment) net += seg[q];
    EXPECT_NEAR(net, out.position_book.net(q), 1e-9);
  }
}

TEST(Backtest, EventsNeverTouchEarlierQuarters) {
  const auto data = testing::synthetic_market(1, 12);
  RunOptions options;
  options.observer = [](const TradingEvent& e, const StrategyProblem& sp, const milp::Solution&) {
    EXPECT_EQ(sp.window_begin, e.window_begin);
    if (e.kind == TradingEvent::Kind::IdcQuarter) EXPECT_EQ(sp.window_begin, e.fire_index);
  };
  const auto out = run_backtest(config_for(data), data, options);
  for (const auto& t : out.trades) {
    if (t.segment == MarketSegment::Idc) EXPECT_GE(t.delivery_index, t.booked_at);
  }
}

TEST(Backtest, ObserverSeesEveryEvent) {
  const auto data = testing::synthetic_market(1, 3);
  std::map<TradingEvent::Kind, int> seen;
  RunOptions options;
  options.observer = [&](const TradingEvent& e, const StrategyProblem& sp,
                         const milp::Solution& s) {
    ++seen[e.kind];
    EXPECT_TRUE(milp::check_solution(sp.problem, s).empty());
    for (const auto& f : audit_strategy_solution(sp, s, BatteryParams{})) ADD_FAILURE() << f;
  };
  run_backtest(config_for(data), data, options);
  EXPECT_EQ(seen[TradingEvent::Kind::DaaAuction], 1);
  EXPECT_EQ(seen[TradingEvent::Kind::IdaAuction], 1);
  EXPECT_EQ(seen[TradingEvent::Kind::IdcQuarter], 96);
}

TEST(Backtest, PerfectForesightStagesAddRevenue) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto data = testing::synthetic_market(1, seed);
    const auto out = run_backtest(config_for(data), data);
    EXPECT_GE(out.cash(MarketSegment::Ida), -1e-6);
    EXPECT_GE(out.cash(MarketSegment::Idc), -1e-6);
    EXPECT_GE(out.revenue_total, out.cash(MarketSegment::Daa) - 1e-6);
  }
}

TEST(Backtest, IdenticalPricesLosslessMatchQuarterDynamicProgram) {
  // Same price in every segment: no arbitrage between markets, so the whole
  // cascade is worth exactly the best quarter-hour schedule.
  auto data = testing::flat_market(6, 0.0);
  const std::vector<double> hourly = {40, 10, -5, 60, 90, 30};
  for (std::size_t q = 0; q < 24; ++q) {
    data.daa_actual[q / 4] = hourly[q / 4];
    data.ida_actual[q] = hourly[q / 4];
    data.id1_actual[q] = hourly[q / 4];
  }
  auto config = config_for(data);
  config.battery.eta_ch = 1.0;
  config.battery.eta_dis = 1.0;
  config.battery.gamma_month = 0.0;
  config.battery.n_cyc = 100.0;
  const auto out = run_backtest(config, data);
  const double oracle = testing::dp_schedule_optimum(data.ida_actual, config.battery,
                                                     config.battery.p_max * 0.25 / 40.0, 0.25);
  EXPECT_NEAR(out.revenue_total, -oracle, 1e-6);
}

TEST(Backtest, ChargesInTheValleyAndSellsTheEveningPeak) {
  const auto data = testing::synthetic_market(1, 99);
  const auto out = run_backtest(config_for(data), data);
  double bought_midday = 0.0, sold_evening = 0.0;
  for (const auto& t : out.trades) {
    if (t.segment != MarketSegment::Daa) continue;
    if (t.side == Side::Buy && t.delivery_index >= 11 && t.delivery_index <= 16) {
      bought_midday += t.volume;
    }
    if (t.side == Side::Sell && t.delivery_index >= 17 && t.delivery_index <= 21) {
      sold_evening += t.volume;
    }
  }
  EXPECT_GT(bought_midday, 0.0);
  EXPECT_GT(sold_evening, 0.0);
}

TEST(Backtest, FileForecastNeedsForecastRows) {
  const auto data = testing::synthetic_market(1, 2);
  auto config = config_for(data);
  config.daa = ForecastMode::from_file();
  EXPECT_THROW(run_backtest(config, data), DataError);
}

TEST(Backtest, NoiseOnlyForTheContinuousMarket) {
  const auto data = testing::synthetic_market(1, 2);
  auto config = config_for(data);
  config.ida = ForecastMode::noisy(0.1, 1);
  EXPECT_THROW(run_backtest(config, data), ConfigError);
  config.ida = ForecastMode::perfect();
  config.idc = ForecastMode::noisy(-0.1, 1);
  EXPECT_THROW(run_backtest(config, data), ConfigError);
}

TEST(Backtest, TimelineMismatch) {
  const auto data = testing::synthetic_market(1, 2);
  auto config = config_for(data);
  config.timeline = testing::test_timeline(48);
  EXPECT_THROW(run_backtest(config, data), ConfigError);
}

TEST(Backtest, NoisyRunsAreReproducible) {
  const auto data = testing::synthetic_market(1, 7);
  auto config = config_for(data);
  config.idc = ForecastMode::noisy(0.3, 42);
  const auto a = run_backtest(config, data);
  const auto b = run_backtest(config, data);
  EXPECT_EQ(a.revenue_total, b.revenue_total);
  EXPECT_EQ(a.trades.size(), b.trades.size());
  EXPECT_EQ(a.position_book.charge, b.position_book.charge);
}

TEST(Backtest, SplitStagesEqualAFullRun) {
  const auto data = testing::synthetic_market(1, 31);
  const auto config = config_for(data);
  const auto full = run_backtest(config, data);
  const auto split = run_continuous(config, data, run_auctions(config, data));
  EXPECT_EQ(full.revenue_total, split.revenue_total);
  EXPECT_EQ(full.position_book.discharge, split.position_book.discharge);
}

}  // namespace
}  // namespace cascade

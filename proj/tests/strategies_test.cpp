#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cascade/error.hpp"
#include "cascade/strategies.hpp"
#include "support/dp_oracle.hpp"
#include "support/synthetic.hpp"

namespace cascade {
namespace {

using milp::Solution;

BatteryParams small_battery(double eta, double n_cyc = 100.0) {
  BatteryParams p;
  p.p_max = 1.0;
  p.e_max = 1.0;
  p.eta_ch = eta;
  p.eta_dis = eta;
  p.gamma_month = 0.0;
  p.n_cyc = n_cyc;
  p.e_init = 0.0;
  return p;
}

Forecast forecast(MarketSegment s, std::vector<double> v) { return {s, std::move(v)}; }

struct Solved {
  StrategyProblem sp;
  Solution solution;
  Signals signals;
};

Solved solve_and_extract(StrategyProblem sp) {
  Solved out{std::move(sp), {}, {}};
  out.solution = milp::solve(out.sp.problem);
  EXPECT_TRUE(out.solution.optimal());
  out.signals = extract_signals(out.sp, out.solution);
  return out;
}

void expect_clean_audit(const Solved& s, const BatteryParams& p) {
  const auto findings = audit_strategy_solution(s.sp, s.solution, p);
  for (const auto& f : findings) ADD_FAILURE() << f;
}

// --- day-ahead -------------------------------------------------------------

TEST(BuildDaa, ConstantPricesDoNothing) {
  const BatteryParams p;
  const auto s = solve_and_extract(build_daa(p, forecast(MarketSegment::Daa,
                                                         std::vector<double>(24, 50.0))));
  EXPECT_NEAR(s.solution.objective_value, 0.0, 1e-9);
  for (std::size_t h = 0; h < 24; ++h) {
    EXPECT_EQ(s.signals.new_charge[h], 0.0);
    EXPECT_EQ(s.signals.new_dis[h], 0.0);
  }
  expect_clean_audit(s, p);
}

TEST(BuildDaa, TwoHourValleyPeakWithoutBindingBudget) {
  const auto p = small_battery(0.95);
  const auto s = solve_and_extract(build_daa(p, forecast(MarketSegment::Daa, {0.0, 100.0})));
  EXPECT_NEAR(s.solution.objective_value, -90.25, 1e-6);
  EXPECT_NEAR(s.signals.new_charge[0], 1.0, 1e-6);
  EXPECT_NEAR(s.signals.new_dis[1], 0.9025, 1e-6);
  EXPECT_NEAR(testing::dp_schedule_optimum({0.0, 100.0}, p, 1.0 / 380.0), -90.25, 1e-9);
}

TEST(BuildDaa, TwoHourValleyPeakWithDailyCycleLimit) {
  // Two cycles per day allow E_max * 2 * 2 / 24 = 1/6 MWh of stored charge.
  const auto p = small_battery(0.95, 2.0);
  const auto s = solve_and_extract(build_daa(p, forecast(MarketSegment::Daa, {0.0, 100.0})));
  const double stored = 1.0 / 6.0;
  EXPECT_NEAR(s.solution.objective_value, -100.0 * stored * 0.95, 1e-6);
  EXPECT_NEAR(s.signals.new_charge[0], stored / 0.95, 1e-6);
  expect_clean_audit(s, p);
}

TEST(BuildDaa, RejectsEmptyForecast) {
  EXPECT_THROW(build_daa(BatteryParams{}, forecast(MarketSegment::Daa, {})), ConfigError);
}

TEST(BuildDaa, ProblemShape) {
  const auto sp = build_daa(BatteryParams{}, forecast(MarketSegment::Daa, std::vector(5, 1.0)));
  EXPECT_EQ(sp.new_charge.size(), 5u);
  EXPECT_EQ(sp.soc.size(), 6u);
  EXPECT_EQ(sp.mode.size(), 5u);
  EXPECT_EQ(sp.problem.num_binaries(), 5u);
  EXPECT_TRUE(sp.close_charge.empty());
}

// Copy of a problem with the binaries relaxed to continuous [0, 1].
milp::Problem relax(const milp::Problem& p) {
  milp::Problem q;
  for (const auto& v : p.variables()) q.add_continuous(v.name, v.lower, v.upper);
  for (const auto& c : p.constraints()) q.add_constraint(c.name, c.terms, c.sense, c.rhs);
  q.set_objective(p.objective(), p.objective_constant());
  return q;
}

TEST(BuildDaa, ModeBinaryPreventsSimultaneousFlowsAtNegativePrices) {
  auto p = small_battery(0.95);
  p.e_max = 0.1;
  const auto sp = build_daa(p, forecast(MarketSegment::Daa, {-50.0}));
  const auto relaxed = milp::solve(relax(sp.problem));
  ASSERT_TRUE(relaxed.optimal());
  EXPECT_GT(relaxed.value(sp.new_charge[0]), 1e-6);
  EXPECT_GT(relaxed.value(sp.new_dis[0]), 1e-6);

  const auto exact = milp::solve(sp.problem);
  ASSERT_TRUE(exact.optimal());
  EXPECT_FALSE(exact.value(sp.new_charge[0]) > 1e-6 && exact.value(sp.new_dis[0]) > 1e-6);
  EXPECT_LT(relaxed.objective_value, exact.objective_value - 1e-6);
}

TEST(BuildDaa, MatchesDynamicProgramOnRandomDays) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> price(-100, 100);
  std::uniform_int_distribution<int> hours(1, 6);
  std::uniform_int_distribution<int> size(1, 6);
  for (int i = 0; i < 40; ++i) {
    BatteryParams p = small_battery(i % 2 == 0 ? 1.0 : 0.95);
    p.p_max = 2.0;
    p.e_max = 2.0 * size(rng) / 4.0;
    p.n_cyc = 24.0 * p.p_max / p.e_max + 1.0;
    std::vector<double> prices(static_cast<std::size_t>(hours(rng)));
    for (auto& c : prices) c = price(rng);
    const auto s = solve_and_extract(build_daa(p, forecast(MarketSegment::Daa, prices)));
    EXPECT_NEAR(s.solution.objective_value,
                testing::dp_schedule_optimum(prices, p, p.p_max / 380.0), 1e-6);
    expect_clean_audit(s, p);
  }
}

TEST(BuildDaa, ScalingPricesScalesTheObjective) {
  const auto data = testing::synthetic_market(1, 4);
  const BatteryParams p;
  const auto base = solve_and_extract(build_daa(p, forecast(MarketSegment::Daa, data.daa_actual)));
  std::vector<double> scaled = data.daa_actual;
  for (auto& c : scaled) c *= 3.0;
  const auto sp = build_daa(p, forecast(MarketSegment::Daa, scaled));
  const auto s = milp::solve(sp.problem);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective_value, 3.0 * base.solution.objective_value, 1e-6);
  // The unscaled optimum is still optimal for the scaled prices.
  EXPECT_TRUE(milp::check_solution(sp.problem, base.solution).empty());
  EXPECT_NEAR(sp.problem.evaluate_objective(base.solution.values), s.objective_value, 1e-6);
}

// --- intraday auction ------------------------------------------------------

TEST(BuildIda, FlatForecastWithoutPositionDoesNothing) {
  const BatteryParams p;
  const auto s = solve_and_extract(
      build_ida(p, forecast(MarketSegment::Ida, std::vector(96, 80.0)), PositionBook(96)));
  EXPECT_NEAR(s.solution.objective_value, 0.0, 1e-9);
  for (std::size_t q = 0; q < 96; ++q) {
    EXPECT_EQ(s.signals.new_charge[q] + s.signals.new_dis[q], 0.0);
  }
}

TEST(BuildIda, ChargeThreeQuartersSellTheLast) {
  const auto p = small_battery(1.0);
  const auto s = solve_and_extract(
      build_ida(p, forecast(MarketSegment::Ida, {0, 0, 0, 100}), PositionBook(4)));
  EXPECT_NEAR(s.solution.objective_value, -25.0, 1e-6);
  EXPECT_NEAR(s.signals.new_dis[3], 1.0, 1e-6);
  expect_clean_audit(s, p);
}

TEST(BuildIda, PositionLengthMismatch) {
  EXPECT_THROW(build_ida(BatteryParams{}, forecast(MarketSegment::Ida, std::vector(8, 1.0)),
                         PositionBook(4)),
               ValidationError);
}

TEST(BuildIda, ClosesAnAuctionSaleWhenThatPays) {
  BatteryParams p = small_battery(1.0);
  p.e_max = 2.0;
  p.e_init = 1.0;
  PositionBook daa(8);
  for (std::size_t q = 0; q < 4; ++q) daa.discharge[q] = 1.0;  // sold 1 MW in hour 0
  std::vector<double> f = {150, 150, 150, 150, 300, 300, 300, 300};

  auto free = solve_and_extract(build_ida(p, forecast(MarketSegment::Ida, f), daa));
  auto forbid = build_ida(p, forecast(MarketSegment::Ida, f), daa);
  for (const auto id : forbid.close_charge) forbid.problem.set_bounds(id, 0.0, 0.0);
  const auto no_close = milp::solve(forbid.problem);
  ASSERT_TRUE(no_close.optimal());

  EXPECT_LT(free.solution.objective_value, no_close.objective_value - 1e-6);
  double closed = 0.0;
  for (std::size_t q = 0; q < 8; ++q) {
    EXPECT_LE(free.signals.close_charge[q], daa.discharge[q] + 1e-9);
    EXPECT_LE(free.signals.close_dis[q], daa.charge[q] + 1e-9);
    closed += free.signals.close_charge[q];
  }
  EXPECT_GT(closed, 1e-6);
  expect_clean_audit(free, p);
}

TEST(BuildIda, ZeroTradesAreFeasibleAroundAnyAuctionSchedule) {
  const auto data = testing::synthetic_market(1, 21);
  const BatteryParams p;
  const auto daa = solve_and_extract(build_daa(p, forecast(MarketSegment::Daa, data.daa_actual)));
  PositionBook book(96);
  add_hourly_to_book(book, daa.signals);
  const auto ida = solve_and_extract(build_ida(p, forecast(MarketSegment::Ida, data.ida_actual), book));
  EXPECT_LE(ida.solution.objective_value, 1e-9);
  expect_clean_audit(ida, p);
}

// --- intraday continuous ---------------------------------------------------

TEST(BuildIdc, FlatForecastEmptyBookDoesNothing) {
  const BatteryParams p;
  const auto tl = testing::test_timeline(24);
  const auto s = solve_and_extract(build_idc(p, forecast(MarketSegment::Idc, std::vector(96, 70.0)),
                                             PositionBook(96), 0.0, 0, 96, tl));
  EXPECT_NEAR(s.solution.objective_value, 0.0, 1e-9);
}

TEST(BuildIdc, SellsBackABuyIntoASpike) {
  const auto p = small_battery(1.0);
  const auto tl = testing::test_timeline(1);
  PositionBook book(4);
  book.charge[2] = 1.0;
  const auto s = solve_and_extract(
      build_idc(p, forecast(MarketSegment::Idc, {50, 50, 500, 50}), book, 0.0, 0, 96, tl));
  EXPECT_NEAR(s.signals.close_dis[2], 1.0, 1e-6);
  EXPECT_LE(s.signals.close_dis[2], 1.0 + 1e-9);
  expect_clean_audit(s, p);
}

TEST(BuildIdc, LastQuarterWindow) {
  const BatteryParams p;
  const auto tl = testing::test_timeline(24);
  const auto sp = build_idc(p, forecast(MarketSegment::Idc, {42.0}), PositionBook(96), 0.0, 95,
                            96, tl);
  EXPECT_EQ(sp.new_charge.size(), 1u);
  EXPECT_EQ(sp.new_dis.size(), 1u);
  EXPECT_EQ(sp.soc.size(), 2u);
  EXPECT_EQ(sp.window_begin, 95u);
}

TEST(BuildIdc, WindowOutsideTimeline) {
  const auto tl = testing::test_timeline(1);
  EXPECT_THROW(build_idc(BatteryParams{}, forecast(MarketSegment::Idc, {1.0}), PositionBook(4),
                         0.0, 4, 96, tl),
               ValidationError);
  EXPECT_THROW(build_idc(BatteryParams{}, forecast(MarketSegment::Idc, {1.0, 2.0}),
                         PositionBook(4), 0.0, 3, 96, tl),
               ValidationError);
}

// --- signals ---------------------------------------------------------------

TEST(ExtractSignals, RejectsNonOptimal) {
  const auto sp = build_daa(BatteryParams{}, forecast(MarketSegment::Daa, {1.0}));
  Solution s;
  s.status = milp::Status::Infeasible;
  EXPECT_THROW(extract_signals(sp, s), ValidationError);
}

TEST(ExtractSignals, ResolutionPerSegment) {
  const auto sp = build_daa(BatteryParams{}, forecast(MarketSegment::Daa, {1.0, 2.0, 3.0, 4.0}));
  Solution s;
  s.status = milp::Status::Optimal;
  s.values.assign(sp.problem.num_variables(), 0.0);
  s.values[sp.new_charge[3].index] = 1.0;
  const auto sig = extract_signals(sp, s);
  EXPECT_EQ(sig.new_charge[3] * sig.dt(), 1.0);

  const auto ida = build_ida(BatteryParams{}, forecast(MarketSegment::Ida, std::vector(12, 1.0)),
                             PositionBook(12));
  Solution t;
  t.status = milp::Status::Optimal;
  t.values.assign(ida.problem.num_variables(), 0.0);
  t.values[ida.new_dis[10].index] = 2.0;
  const auto sig2 = extract_signals(ida, t);
  EXPECT_EQ(sig2.new_dis[10] * sig2.dt(), 0.5);
}

TEST(ExtractSignals, AllZero) {
  const auto sp = build_ida(BatteryParams{}, forecast(MarketSegment::Ida, std::vector(8, 1.0)),
                            PositionBook(8));
  Solution s;
  s.status = milp::Status::Optimal;
  s.values.assign(sp.problem.num_variables(), 0.0);
  const auto sig = extract_signals(sp, s);
  for (std::size_t q = 0; q < 8; ++q) {
    EXPECT_EQ(sig.new_charge[q] + sig.new_dis[q] + sig.close_charge[q] + sig.close_dis[q], 0.0);
  }
}

TEST(ExtractSignals, NetsABuyAgainstAClosingSellInTheSameQuarter) {
  PositionBook book(4);
  book.charge[1] = 1.0;
  const auto sp = build_ida(BatteryParams{}, forecast(MarketSegment::Ida, std::vector(4, 1.0)), book);
  Solution s;
  s.status = milp::Status::Optimal;
  s.values.assign(sp.problem.num_variables(), 0.0);
  s.values[sp.new_charge[1].index] = 0.6;
  s.values[sp.close_dis[1].index] = 0.4;
  const auto sig = extract_signals(sp, s);
  EXPECT_NEAR(sig.new_charge[1], 0.2, 1e-12);
  EXPECT_EQ(sig.close_dis[1], 0.0);
}

TEST(Audit, FlagsSimultaneousFlows) {
  const auto p = small_battery(1.0);
  const auto sp = build_daa(p, forecast(MarketSegment::Daa, {1.0}));
  Solution s;
  s.status = milp::Status::Optimal;
  s.values.assign(sp.problem.num_variables(), 0.0);
  s.values[sp.new_charge[0].index] = 0.5;
  s.values[sp.new_dis[0].index] = 0.5;
  EXPECT_FALSE(audit_strategy_solution(sp, s, p).empty());
}

TEST(AddHourlyToBook, SpreadsEachHourOverFourQuarters) {
  Signals daa;
  daa.segment = MarketSegment::Daa;
  daa.new_charge = {2.0, 0.0};
  daa.new_dis = {0.0, 3.0};
  PositionBook book(8);
  add_hourly_to_book(book, daa);
  for (std::size_t q = 0; q < 4; ++q) EXPECT_EQ(book.charge[q], 2.0);
  for (std::size_t q = 4; q < 8; ++q) EXPECT_EQ(book.discharge[q], 3.0);
}

}  // namespace
}  // namespace cascade

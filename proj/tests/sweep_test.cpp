#include <gtest/gtest.h>

#include "cascade/engine.hpp"
#include "cascade/error.hpp"
#include "cascade/sweep.hpp"
#include "support/synthetic.hpp"

namespace cascade {
namespace {

TEST(Ladder, BaselineOnly) {
  const auto data = testing::synthetic_market(1, 1);
  const auto ladder = build_scenario_ladder(data, {}, {0});
  ASSERT_EQ(ladder.size(), 1u);
  EXPECT_EQ(ladder[0].label, "PF");
}

TEST(Ladder, NoisyRows) {
  const auto data = testing::synthetic_market(1, 1);
  const auto ladder = build_scenario_ladder(data, {0.1, 0.2, 0.5, 1.0}, {3});
  ASSERT_EQ(ladder.size(), 5u);
  EXPECT_EQ(ladder[1].group, "ID1 sigma=10%");
  EXPECT_EQ(ladder[1].label, "ID1 sigma=10% seed=3");
  EXPECT_EQ(ladder[4].group, "ID1 sigma=100%");
  EXPECT_EQ(ladder[4].idc.kind, ForecastMode::Kind::NoisyId1);
  EXPECT_EQ(ladder[4].idc.sigma, 1.0);
  EXPECT_EQ(ladder[4].daa.kind, ForecastMode::Kind::Perfect);
}

TEST(Ladder, FileForecastsComeFirst) {
  auto data = testing::synthetic_market(1, 1);
  data.daa_forecast = data.daa_actual;
  data.ida_forecast = data.ida_actual;
  const auto ladder = build_scenario_ladder(data, {0.2}, {1, 2});
  ASSERT_EQ(ladder.size(), 5u);
  EXPECT_EQ(ladder[1].label, "DAA forecast");
  EXPECT_EQ(ladder[2].label, "DAA+IDA forecast");
  EXPECT_EQ(ladder[3].daa.kind, ForecastMode::Kind::FromFile);
  EXPECT_EQ(ladder[3].ida.kind, ForecastMode::Kind::FromFile);
}

TEST(Ladder, Errors) {
  const auto data = testing::synthetic_market(1, 1);
  EXPECT_THROW(build_scenario_ladder(data, {0.1}, {}), ConfigError);
  EXPECT_THROW(build_scenario_ladder(data, {-0.1}, {1}), ConfigError);
}

TEST(Sweep, BaselineEqualsPlainRun) {
  const auto data = testing::synthetic_market(1, 3);
  BacktestConfig base;
  base.timeline = data.timeline;
  const auto rs = run_sweep(base, data, {});
  ASSERT_EQ(rs.size(), 1u);
  const auto p = run_backtest(base, data);
  EXPECT_EQ(rs[0].total, p.revenue_total);
  EXPECT_EQ(rs[0].cash, p.cash_by_segment);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  const auto data = testing::synthetic_market(1, 3);
  BacktestConfig base;
  base.timeline = data.timeline;
  SweepOptions one{{0.1, 0.5}, {1, 2}, 1};
  SweepOptions four = one;
  four.threads = 4;
  const auto a = run_sweep(base, data, one);
  const auto b = run_sweep(base, data, four);
  ASSERT_EQ(a.size(), 5u);
  ASSERT_EQ(b.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].label, b[i].label);
    EXPECT_EQ(a[i].total, b[i].total);
    EXPECT_EQ(a[i].cash, b[i].cash);
  }
  // Noisy runs trade the same auctions as the baseline.
  EXPECT_EQ(a[1].cash[0], a[0].cash[0]);
  EXPECT_EQ(a[1].cash[1], a[0].cash[1]);
}

}  // namespace
}  // namespace cascade

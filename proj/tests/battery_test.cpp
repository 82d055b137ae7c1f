#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cascade/battery.hpp"
#include "cascade/error.hpp"

namespace cascade {
namespace {

BatteryParams lossless() {
  BatteryParams p;
  p.eta_ch = 1.0;
  p.eta_dis = 1.0;
  p.gamma_month = 0.0;
  return p;
}

TEST(Battery, CaseStudyDefaults) {
  const BatteryParams p;
  EXPECT_EQ(p.p_max, 10.0);
  EXPECT_EQ(p.e_max, 10.0);
  EXPECT_EQ(p.eta_ch, 0.95);
  EXPECT_EQ(p.eta_dis, 0.95);
  EXPECT_EQ(p.gamma_month, 0.03);
  EXPECT_EQ(p.n_cyc, 2.0);
  EXPECT_EQ(p.e_init, 0.0);
  EXPECT_NO_THROW(p.validate());
}

TEST(Battery, ValidateRejectsBadLimits) {
  auto bad = [](auto mutate) {
    BatteryParams p;
    mutate(p);
    EXPECT_THROW(p.validate(), ConfigError);
  };
  bad([](BatteryParams& p) { p.p_max = 0; });
  bad([](BatteryParams& p) { p.e_max = -1; });
  bad([](BatteryParams& p) { p.e_init = 11; });
  bad([](BatteryParams& p) { p.e_init = -0.1; });
  bad([](BatteryParams& p) { p.n_cyc = 0; });
  bad([](BatteryParams& p) { p.eta_ch = 0; });
  bad([](BatteryParams& p) { p.eta_dis = 1.01; });
  bad([](BatteryParams& p) { p.gamma_month = 1.0; });
}

TEST(GammaPerStep, ZeroMonthlyLossIsZero) { EXPECT_EQ(gamma_per_step(0.0, 1.0), 0.0); }

TEST(GammaPerStep, RecompoundsToMonthlyRetention) {
  const double g = gamma_per_step(0.03, 1.0);
  EXPECT_NEAR(std::pow(1.0 - g, 730.0), 0.97, 1e-12);
  double kept = 1.0;
  for (int i = 0; i < 730; ++i) kept *= 1.0 - g;
  EXPECT_NEAR(kept, 0.97, 1e-12);
}

TEST(GammaPerStep, RejectsMonthlyLossOfOne) {
  EXPECT_THROW(gamma_per_step(1.0, 1.0), ConfigError);
  EXPECT_THROW(gamma_per_step(0.03, 0.0), ConfigError);
}

TEST(StepSoc, ChargeWithZeroDecay) {
  BatteryParams p;
  p.gamma_month = 0.0;
  EXPECT_NEAR(step_soc(5.0, 2.0, 0.0, 1.0, p), 6.9, 1e-12);
}

TEST(StepSoc, DischargeWithZeroDecay) {
  BatteryParams p;
  p.gamma_month = 0.0;
  EXPECT_NEAR(step_soc(1.0, 0.0, 0.9025, 1.0, p), 0.05, 1e-12);
}

TEST(StepSoc, IdleBatteryDecays) {
  const BatteryParams p;
  EXPECT_LT(step_soc(10.0, 0.0, 0.0, 0.25, p), 10.0);
  EXPECT_NEAR(step_soc(10.0, 0.0, 0.0, 730.0, p), 9.7, 1e-9);
}

TEST(StepSoc, LosslessConservesEnergy) {
  const auto p = lossless();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double e = u(rng), ch = u(rng), dis = u(rng);
    EXPECT_NEAR(step_soc(e, ch, dis, 0.25, p) - e, (ch - dis) * 0.25, 1e-12);
  }
}

TEST(StepSoc, MonotoneInPowers) {
  const BatteryParams p;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double e = u(rng), ch = u(rng), dis = u(rng), d = u(rng) + 1e-3;
    EXPECT_GT(step_soc(e, ch + d, dis, 0.25, p), step_soc(e, ch, dis, 0.25, p));
    EXPECT_LT(step_soc(e, ch, dis + d, 0.25, p), step_soc(e, ch, dis, 0.25, p));
  }
}

TEST(HourlyPowerWeight, OneWithoutDecay) {
  BatteryParams p;
  p.gamma_month = 0.0;
  EXPECT_EQ(hourly_power_weight(p), 1.0);
}

TEST(HourlyPowerWeight, MatchesFourQuarterSteps) {
  BatteryParams p;
  p.gamma_month = 0.2;
  const double w = hourly_power_weight(p);
  for (const auto [e, ch, dis] : {std::tuple{0.0, 10.0, 0.0}, std::tuple{7.0, 0.0, 3.0},
                                  std::tuple{3.0, 1.5, 0.0}}) {
    double quarters = e;
    for (int k = 0; k < 4; ++k) quarters = step_soc(quarters, ch, dis, 0.25, p);
    const double hourly =
        e * p.retention(1.0) + w * (ch * p.eta_ch - dis / p.eta_dis);
    EXPECT_NEAR(hourly, quarters, 1e-12);
  }
}

TEST(Cycles, FullEquivalentCycles) {
  const BatteryParams p;
  EXPECT_EQ(full_equivalent_cycles(10.0, p), 1.0);
  EXPECT_EQ(full_equivalent_cycles(0.0, p), 0.0);
}

TEST(Cycles, DailyBudgetOfTheCaseStudy) {
  const BatteryParams p;
  EXPECT_DOUBLE_EQ(p.cycle_budget(24, 24), 20.0);
  EXPECT_DOUBLE_EQ(p.cycle_budget(96, 96), 20.0);
  EXPECT_DOUBLE_EQ(p.cycle_budget(48, 96), 10.0);
}

}  // namespace
}  // namespace cascade

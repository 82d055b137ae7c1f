#include <gtest/gtest.h>

#include "cascade/config.hpp"
#include "cascade/error.hpp"

namespace cascade {
namespace {

TEST(Config, Defaults) {
  const auto c = parse_config("");
  EXPECT_EQ(c.battery.p_max, BatteryParams{}.p_max);
  EXPECT_EQ(c.n_p, 96u);
  EXPECT_EQ(c.idc.kind, ForecastMode::Kind::Perfect);
  EXPECT_FALSE(c.start.has_value());
}

TEST(Config, ParsesKeysAndComments) {
  const auto c = parse_config(
      "# battery\n"
      "p_max = 5\n"
      "e_max=20   # MWh\n"
      "eta_ch = 0.9\n"
      "n_cyc = 1.5\n"
      "start = 2023-03-01T00:00:00+01:00\n"
      "hours = 48\n"
      "n_p = 32\n"
      "forecast_daa = file\n"
      "forecast_idc = noisy\n"
      "sigma = 0.2\n"
      "seed = 7\n");
  EXPECT_EQ(c.battery.p_max, 5.0);
  EXPECT_EQ(c.battery.e_max, 20.0);
  EXPECT_EQ(c.battery.eta_ch, 0.9);
  EXPECT_EQ(c.battery.n_cyc, 1.5);
  EXPECT_EQ(*c.hours, 48u);
  EXPECT_EQ(c.n_p, 32u);
  EXPECT_EQ(c.daa.kind, ForecastMode::Kind::FromFile);
  EXPECT_EQ(c.idc.kind, ForecastMode::Kind::NoisyId1);
  EXPECT_EQ(c.start->offset, std::chrono::minutes{60});

  const auto b = c.backtest(Timeline(c.start->utc, *c.hours, c.start->offset));
  EXPECT_EQ(b.idc.sigma, 0.2);
  EXPECT_EQ(b.idc.seed, 7u);
  EXPECT_EQ(b.n_p, 32u);
}

TEST(Config, ErrorsNameTheLine) {
  try {
    parse_config("p_max = 5\ne_maxx = 3\n", "my.cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("my.cfg:2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("e_maxx"), std::string::npos) << e.what();
  }
}

TEST(Config, RejectsBadValues) {
  for (const char* text : {"p_max = -1", "p_max = abc", "eta_ch = 1.5", "n_p = 0",
                           "hours = 0", "sigma = -0.1", "forecast_daa = noisy",
                           "forecast_ida = sometimes", "p_max", "seed = -3",
                           "start = yesterday"}) {
    EXPECT_THROW(parse_config(text), ConfigError) << text;
  }
}

TEST(Config, TextRoundTrip) {
  RunConfig c;
  c.set("p_max", "7.25");
  c.set("gamma_month", "0.03");
  c.set("forecast_ida", "file");
  c.set("hours", "72");
  c.set("seed", "18446744073709551615");
  const auto back = parse_config(to_config_text(c));
  EXPECT_EQ(back.battery.p_max, 7.25);
  EXPECT_EQ(back.battery.gamma_month, 0.03);
  EXPECT_EQ(back.ida.kind, ForecastMode::Kind::FromFile);
  EXPECT_EQ(*back.hours, 72u);
  EXPECT_EQ(back.seed, 18446744073709551615ull);
}

}  // namespace
}  // namespace cascade

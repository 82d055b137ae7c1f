#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cascade/engine.hpp"
#include "cascade/error.hpp"
#include "cascade/reporting.hpp"
#include "support/synthetic.hpp"

namespace cascade {
namespace {

using namespace std::chrono;

Portfolio with_cash(double daa, double ida, double idc) {
  Portfolio p;
  p.cash_by_segment = {daa, ida, idc};
  p.revenue_total = daa + ida + idc;
  return p;
}

BacktestConfig config_for(const MarketData& data) {
  BacktestConfig c;
  c.timeline = data.timeline;
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(FormatMoney, Rounding) {
  EXPECT_EQ(format_money(12.345), "12.35");
  EXPECT_EQ(format_money(-0.001), "0.00");
  EXPECT_EQ(format_money(-3.5), "-3.50");
  EXPECT_EQ(format_money(0.0), "0.00");
}

TEST(RevenueReport, Shares) {
  const auto r = revenue_report(with_cash(200, 100, 100), testing::test_timeline(24));
  ASSERT_TRUE(r.share_percent[0] && r.share_percent[1] && r.share_percent[2]);
  EXPECT_DOUBLE_EQ(*r.share_percent[0], 50.0);
  EXPECT_DOUBLE_EQ(*r.share_percent[1], 25.0);
  EXPECT_DOUBLE_EQ(*r.share_percent[2], 25.0);
  EXPECT_DOUBLE_EQ(r.total, 400.0);
}

TEST(RevenueReport, ZeroTotalHasNoShares) {
  const auto r = revenue_report(with_cash(0, 0, 0), testing::test_timeline(24));
  for (const auto& s : r.share_percent) EXPECT_FALSE(s.has_value());
  std::ostringstream out;
  write_revenue_csv(r, out);
  EXPECT_EQ(out.str(),
            "segment,revenue_eur,share_pct\nDAA,0.00,n/a\nIDA,0.00,n/a\nIDC,0.00,n/a\n"
            "TOTAL,0.00,n/a\n");
}

TEST(RevenueReport, OffsettingSegmentsHaveNoShares) {
  const auto r = revenue_report(with_cash(10, -10, 0), testing::test_timeline(24));
  EXPECT_FALSE(r.share_percent[0].has_value());
}

TEST(RevenueReport, CsvAddsUpToTheCent) {
  const auto data = testing::synthetic_market(2, 5);
  const auto p = run_backtest(config_for(data), data);
  const auto r = revenue_report(p, data.timeline);
  std::ostringstream out;
  write_revenue_csv(r, out);
  const auto rows = lines(out.str());
  ASSERT_EQ(rows.size(), 5u);
  double sum = 0.0;
  for (int i = 1; i <= 3; ++i) sum += std::stod(rows[i].substr(4));
  const double total = std::stod(rows[4].substr(6));
  EXPECT_LE(std::abs(sum - total), 0.015 + 1e-9);
  EXPECT_EQ(rows[4].substr(0, 6 + format_money(p.revenue_total).size()),
            "TOTAL," + format_money(p.revenue_total));
}

TEST(RevenueReport, DailyCashSumsToSegments) {
  const auto data = testing::synthetic_market(3, 6);
  const auto p = run_backtest(config_for(data), data);
  const auto r = revenue_report(p, data.timeline);
  ASSERT_EQ(r.daily.size(), 3u);
  EXPECT_EQ(r.daily[0].date, year_month_day{year{2023} / 3 / 1});
  EXPECT_EQ(r.daily[2].date, year_month_day{year{2023} / 3 / 3});
  for (std::size_t s = 0; s < kSegmentCount; ++s) {
    double sum = 0.0;
    for (const auto& d : r.daily) sum += d.cash[s];
    EXPECT_NEAR(sum, r.cash[s], 1e-6);
  }
  std::ostringstream out;
  write_daily_revenue_csv(r, out);
  const auto rows = lines(out.str());
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "date,daa_eur,ida_eur,idc_eur,total_eur");
  EXPECT_EQ(rows[1].substr(0, 11), "2023-03-01,");
}

TEST(DayTrace, NoTradesMeansFlatSoc) {
  const auto data = testing::flat_market(48, 50.0);
  const auto p = run_backtest(config_for(data), data);
  ASSERT_TRUE(p.trades.empty());
  const auto t = day_trace(p, data, 1);
  ASSERT_EQ(t.rows.size(), 96u);
  EXPECT_EQ(t.date, year_month_day{year{2023} / 3 / 2});
  for (const auto& row : t.rows) {
    EXPECT_EQ(row.net_mw_total, 0.0);
    EXPECT_EQ(row.soc_start, BatteryParams{}.e_init);
    EXPECT_EQ(row.soc_end, BatteryParams{}.e_init);
  }
}

TEST(DayTrace, RowsMatchThePortfolio) {
  const auto data = testing::synthetic_market(2, 9);
  const auto p = run_backtest(config_for(data), data);
  const auto t = day_trace(p, data, year_month_day{year{2023} / 3 / 2});
  EXPECT_EQ(t.day, 1u);
  for (std::size_t k = 0; k < 96; ++k) {
    const std::size_t q = 96 + k;
    const auto& row = t.rows[k];
    EXPECT_EQ(row.start, data.timeline.quarter_start(q));
    EXPECT_EQ(row.daa_price, data.daa_actual[q / 4]);
    EXPECT_EQ(row.ida_price, data.ida_actual[q]);
    EXPECT_EQ(row.id1_price, data.id1_actual[q]);
    EXPECT_NEAR(row.net_mw_total, p.position_book.net(q), 1e-12);
    EXPECT_NEAR(row.net_mw[0] + row.net_mw[1] + row.net_mw[2], row.net_mw_total, 1e-9);
    EXPECT_EQ(row.soc_start, p.soc_trajectory.values[q]);
    EXPECT_EQ(row.soc_end, p.soc_trajectory.values[q + 1]);
  }
  std::ostringstream out;
  write_day_trace_csv(t, data.timeline.utc_offset(), out);
  const auto rows = lines(out.str());
  ASSERT_EQ(rows.size(), 97u);
  EXPECT_EQ(rows[1].substr(0, 26), "2023-03-02T00:00:00+01:00,");
}

TEST(DayTrace, OutOfRange) {
  const auto data = testing::flat_market(24, 50.0);
  const auto p = run_backtest(config_for(data), data);
  EXPECT_THROW(day_trace(p, data, 1), IndexError);
  EXPECT_THROW(day_trace(p, data, year_month_day{year{2023} / 2 / 28}), IndexError);
  EXPECT_EQ(day_count(data.timeline), 1u);
}

TEST(TradeLog, OneRowPerTrade) {
  const auto data = testing::synthetic_market(1, 2);
  const auto p = run_backtest(config_for(data), data);
  std::ostringstream out;
  write_trade_log_csv(p, data.timeline, out);
  const auto rows = lines(out.str());
  ASSERT_EQ(rows.size(), p.trades.size() + 1);
  EXPECT_EQ(rows[0], "booked_at,segment,delivery_start,side,volume_mwh,price_eur_mwh,cash_eur");
  std::ostringstream soc;
  write_soc_csv(p, data.timeline, soc);
  EXPECT_EQ(lines(soc.str()).size(), 97u);
}

TEST(Median, OddAndEven) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
  EXPECT_EQ(median({-7}), -7.0);
  EXPECT_THROW(median({}), ValidationError);
}

TEST(Sensitivity, SingleRunMatchesRevenueReport) {
  const auto data = testing::synthetic_market(1, 12);
  const auto p = run_backtest(config_for(data), data);
  const auto rev = revenue_report(p, data.timeline);
  const auto s = sensitivity_report({scenario_result("PF", "PF", p)});
  ASSERT_EQ(s.rows.size(), 1u);
  ASSERT_EQ(s.medians.size(), 1u);
  EXPECT_EQ(s.medians[0].runs, 1u);
  EXPECT_EQ(s.medians[0].total, rev.total);
  EXPECT_EQ(s.medians[0].cash, rev.cash);
  EXPECT_EQ(s.rows[0].cash, rev.cash);
}

TEST(Sensitivity, MediansPerGroup) {
  std::vector<ScenarioResult> rs;
  rs.push_back({"PF", "PF", std::nullopt, std::nullopt, {1, 2, 3}, 6});
  for (int seed = 0; seed < 3; ++seed) {
    const double v = 10.0 * (seed == 1 ? 3 : seed);  // 0, 30, 20
    rs.push_back({"n" + std::to_string(seed), "noisy", 0.1, std::uint64_t(seed), {v, 0, 0}, v});
  }
  const auto s = sensitivity_report(rs);
  ASSERT_EQ(s.medians.size(), 2u);
  EXPECT_EQ(s.medians[0].group, "PF");
  EXPECT_EQ(s.medians[1].group, "noisy");
  EXPECT_EQ(s.medians[1].runs, 3u);
  EXPECT_EQ(s.medians[1].total, 20.0);

  std::ostringstream csv, med, table;
  write_sensitivity_csv(s, csv);
  write_sensitivity_median_csv(s, med);
  write_sensitivity_table(s, table);
  EXPECT_EQ(lines(csv.str()).size(), 5u);
  EXPECT_EQ(lines(csv.str())[0], "scenario,group,sigma,seed,daa_eur,ida_eur,idc_eur,total_eur");
  EXPECT_EQ(lines(med.str())[0], "group,runs,daa_eur,ida_eur,idc_eur,total_eur");
  EXPECT_EQ(lines(med.str())[2], "noisy,3,20.00,0.00,0.00,20.00");
  EXPECT_NE(table.str().find("noisy"), std::string::npos);
  EXPECT_THROW(sensitivity_report({}), ValidationError);
}

}  // namespace
}  // namespace cascade

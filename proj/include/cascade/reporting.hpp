#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cascade/data_io.hpp"
#include "cascade/engine.hpp"
#include "cascade/timeline.hpp"

namespace cascade {

// "12.34"; values that round to zero print as "0.00".
std::string format_money(double eur);

struct DailyRevenue {
  std::chrono::year_month_day date;  // local date of the day's first quarter
  std::array<double, kSegmentCount> cash{};
  double total = 0.0;
};

struct RevenueReport {
  std::array<double, kSegmentCount> cash{};
  // Percent of total; empty when the total is zero.
  std::array<std::optional<double>, kSegmentCount> share_percent{};
  double total = 0.0;
  std::vector<DailyRevenue> daily;  // cash attributed to the delivery day
};

RevenueReport revenue_report(const Portfolio& portfolio, const Timeline& timeline);

// segment,revenue_eur,share_pct (rows DAA, IDA, IDC, TOTAL)
void write_revenue_csv(const RevenueReport& report, std::ostream& out);
// date,daa_eur,ida_eur,idc_eur,total_eur
void write_daily_revenue_csv(const RevenueReport& report, std::ostream& out);
// booked_at,segment,delivery_start,side,volume_mwh,price_eur_mwh,cash_eur
void write_trade_log_csv(const Portfolio& portfolio, const Timeline& timeline, std::ostream& out);
// timestamp,charge_mw,discharge_mw,net_mw,soc_start_mwh,soc_end_mwh
void write_soc_csv(const Portfolio& portfolio, const Timeline& timeline, std::ostream& out);

struct DayTraceRow {
  std::chrono::sys_seconds start;
  double daa_price = 0.0;
  double ida_price = 0.0;
  double id1_price = 0.0;
  std::array<double, kSegmentCount> net_mw{};  // final net trades per segment
  double net_mw_total = 0.0;                    // delivered battery power, charge positive
  double soc_start = 0.0;
  double soc_end = 0.0;
};

struct DayTrace {
  std::size_t day = 0;
  std::chrono::year_month_day date;
  std::vector<DayTraceRow> rows;  // one per quarter
};

// Day k covers quarters [96k, 96k + 96) of the timeline. Throws IndexError.
std::size_t day_count(const Timeline& timeline);
DayTrace day_trace(const Portfolio& portfolio, const MarketData& data, std::size_t day);
DayTrace day_trace(const Portfolio& portfolio, const MarketData& data,
                   std::chrono::year_month_day date);

// timestamp,daa_price,ida_price,id1_price,daa_net_mw,ida_net_mw,idc_net_mw,net_mw,
// soc_start_mwh,soc_end_mwh
void write_day_trace_csv(const DayTrace& trace, std::chrono::minutes offset, std::ostream& out);

struct ScenarioResult {
  std::string label;  // unique per run
  std::string group;  // runs sharing a group are summarised by their median
  std::optional<double> sigma;
  std::optional<std::uint64_t> seed;
  std::array<double, kSegmentCount> cash{};
  double total = 0.0;
};

ScenarioResult scenario_result(std::string label, std::string group, const Portfolio& portfolio);

struct GroupMedian {
  std::string group;
  std::size_t runs = 0;
  std::array<double, kSegmentCount> cash{};
  double total = 0.0;
};

struct SensitivityReport {
  std::vector<ScenarioResult> rows;
  std::vector<GroupMedian> medians;  // groups in order of first appearance
};

// Throws ValidationError for an empty result list.
SensitivityReport sensitivity_report(std::vector<ScenarioResult> results);

double median(std::vector<double> values);

// scenario,group,sigma,seed,daa_eur,ida_eur,idc_eur,total_eur
void write_sensitivity_csv(const SensitivityReport& report, std::ostream& out);
// group,runs,daa_eur,ida_eur,idc_eur,total_eur
void write_sensitivity_median_csv(const SensitivityReport& report, std::ostream& out);
void write_sensitivity_table(const SensitivityReport& report, std::ostream& out);

}  // namespace cascade

#include "cascade/reporting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cascade/error.hpp"

namespace cascade {

namespace chr = std::chrono;

std::string format_money(double eur) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", eur);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_date(const chr::year_month_day& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(d.year()), unsigned(d.month()),
                unsigned(d.day()));
  return buf;
}

chr::year_month_day local_date(chr::sys_seconds t, chr::minutes offset) {
  return chr::year_month_day{chr::floor<chr::days>(t + offset)};
}

std::size_t delivery_quarter(const Trade& t) {
  return t.segment == MarketSegment::Daa ? t.delivery_index * kQuartersPerHour : t.delivery_index;
}

}  // namespace

std::size_t day_count(const Timeline& timeline) {
  return (timeline.quarters() + kQuartersPerDay - 1) / kQuartersPerDay;
}

RevenueReport revenue_report(const Portfolio& portfolio, const Timeline& timeline) {
  RevenueReport r;
  r.cash = portfolio.cash_by_segment;
  r.total = portfolio.revenue_total;
  if (r.total != 0.0) {
    for (std::size_t i = 0; i < kSegmentCount; ++i) r.share_percent[i] = 100.0 * r.cash[i] / r.total;
  }
  const std::size_t days = day_count(timeline);
  r.daily.resize(days);
  for (std::size_t d = 0; d < days; ++d) {
    r.daily[d].date =
        local_date(timeline.quarter_start(d * kQuartersPerDay), timeline.utc_offset());
  }
  for (const auto& t : portfolio.trades) {
    auto& day = r.daily[delivery_quarter(t) / kQuartersPerDay];
    day.cash[index_of(t.segment)] += t.cash();
    day.total += t.cash();
  }
  return r;
}

void write_revenue_csv(const RevenueReport& report, std::ostream& out) {
  out << "segment,revenue_eur,share_pct\n";
  for (const auto s : kAllSegments) {
    const auto i = index_of(s);
    out << to_string(s) << ',' << format_money(report.cash[i]) << ','
        << (report.share_percent[i] ? format_money(*report.share_percent[i]) : "n/a") << '\n';
  }
  out << "TOTAL," << format_money(report.total) << ','
      << (report.total != 0.0 ? "100.00" : "n/a") << '\n';
}

void write_daily_revenue_csv(const RevenueReport& report, std::ostream& out) {
  out << "date,daa_eur,ida_eur,idc_eur,total_eur\n";
  for (const auto& d : report.daily) {
    out << format_date(d.date);
    for (const double c : d.cash) out << ',' << format_money(c);
    out << ',' << format_money(d.total) << '\n';
  }
}

void write_trade_log_csv(const Portfolio& portfolio, const Timeline& timeline, std::ostream& out) {
  out << "booked_at,segment,delivery_start,side,volume_mwh,price_eur_mwh,cash_eur\n";
  for (const auto& t : portfolio.trades) {
    const auto delivery = t.segment == MarketSegment::Daa ? timeline.hour_start(t.delivery_index)
                                                          : timeline.quarter_start(t.delivery_index);
    out << format_timestamp(timeline.quarter_start(t.booked_at), timeline.utc_offset()) << ','
        << to_string(t.segment) << ',' << format_timestamp(delivery, timeline.utc_offset()) << ','
        << (t.side == Side::Buy ? "buy" : "sell") << ',' << shortest(t.volume) << ','
        << shortest(t.price) << ',' << format_money(t.cash()) << '\n';
  }
}

void write_soc_csv(const Portfolio& portfolio, const Timeline& timeline, std::ostream& out) {
  const auto& book = portfolio.position_book;
  const auto& soc = portfolio.soc_trajectory.values;
  if (soc.size() != book.size() + 1) {
    throw ValidationError("SOC trajectory does not match the position book");
  }
  out << "timestamp,charge_mw,discharge_mw,net_mw,soc_start_mwh,soc_end_mwh\n";
  for (std::size_t q = 0; q < book.size(); ++q) {
    out << format_timestamp(timeline.quarter_start(q), timeline.utc_offset()) << ','
        << shortest(book.charge[q]) << ',' << shortest(book.discharge[q]) << ','
        << shortest(book.net(q)) << ',' << shortest(soc[q]) << ',' << shortest(soc[q + 1])
        << '\n';
  }
}

DayTrace day_trace(const Portfolio& portfolio, const MarketData& data, std::size_t day) {
  const auto& tl = data.timeline;
  if (day >= day_count(tl)) {
    throw IndexError("day " + std::to_string(day) + " outside the " +
                     std::to_string(day_count(tl)) + "-day timeline");
  }
  const auto& soc = portfolio.soc_trajectory.values;
  if (soc.size() != tl.quarters() + 1 || portfolio.position_book.size() != tl.quarters()) {
    throw ValidationError("portfolio does not match the market data timeline");
  }
  DayTrace trace;
  trace.day = day;
  trace.date = local_date(tl.quarter_start(day * kQuartersPerDay), tl.utc_offset());
  const std::size_t end = std::min(tl.quarters(), (day + 1) * kQuartersPerDay);
  for (std::size_t q = day * kQuartersPerDay; q < end; ++q) {
    DayTraceRow row;
    row.start = tl.quarter_start(q);
    row.daa_price = data.daa_actual[q / kQuartersPerHour];
    row.ida_price = data.ida_actual[q];
    row.id1_price = data.id1_actual[q];
    for (std::size_t s = 0; s < kSegmentCount; ++s) {
      const auto& net = portfolio.net_by_segment[s];
      row.net_mw[s] = net.empty() ? 0.0 : net[q];
    }
    row.net_mw_total = portfolio.position_book.net(q);
    row.soc_start = soc[q];
    row.soc_end = soc[q + 1];
    trace.rows.push_back(row);
  }
  return trace;
}

DayTrace day_trace(const Portfolio& portfolio, const MarketData& data,
                   chr::year_month_day date) {
  const auto& tl = data.timeline;
  for (std::size_t d = 0; d < day_count(tl); ++d) {
    if (local_date(tl.quarter_start(d * kQuartersPerDay), tl.utc_offset()) == date) {
      return day_trace(portfolio, data, d);
    }
  }
  throw IndexError("date " + format_date(date) + " is not a day of the timeline");
}

void write_day_trace_csv(const DayTrace& trace, chr::minutes offset, std::ostream& out) {
  out << "timestamp,daa_price,ida_price,id1_price,daa_net_mw,ida_net_mw,idc_net_mw,net_mw,"
         "soc_start_mwh,soc_end_mwh\n";
  for (const auto& r : trace.rows) {
    out << format_timestamp(r.start, offset) << ',' << shortest(r.daa_price) << ','
        << shortest(r.ida_price) << ',' << shortest(r.id1_price);
    for (const double n : r.net_mw) out << ',' << shortest(n);
    out << ',' << shortest(r.net_mw_total) << ',' << shortest(r.soc_start) << ','
        << shortest(r.soc_end) << '\n';
  }
}

ScenarioResult scenario_result(std::string label, std::string group, const Portfolio& portfolio) {
  ScenarioResult r;
  r.label = std::move(label);
  r.group = std::move(group);
  r.cash = portfolio.cash_by_segment;
  r.total = portfolio.revenue_total;
  return r;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

SensitivityReport sensitivity_report(std::vector<ScenarioResult> results) {
  if (results.empty()) throw ValidationError("sensitivity report needs at least one scenario");
  SensitivityReport report;
  report.rows = std::move(results);
  std::vector<std::string> groups;
  for (const auto& r : report.rows) {
    if (std::find(groups.begin(), groups.end(), r.group) == groups.end()) groups.push_back(r.group);
  }
  for (const auto& g : groups) {
    GroupMedian m;
    m.group = g;
    std::array<std::vector<double>, kSegmentCount> cash;
    std::vector<double> total;
    for (const auto& r : report.rows) {
      if (r.group != g) continue;
      for (std::size_t s = 0; s < kSegmentCount; ++s) cash[s].push_back(r.cash[s]);
      total.push_back(r.total);
    }
    m.runs = total.size();
    for (std::size_t s = 0; s < kSegmentCount; ++s) m.cash[s] = median(cash[s]);
    m.total = median(total);
    report.medians.push_back(std::move(m));
  }
  return report;
}

void write_sensitivity_csv(const SensitivityReport& report, std::ostream& out) {
  out << "scenario,group,sigma,seed,daa_eur,ida_eur,idc_eur,total_eur\n";
  for (const auto& r : report.rows) {
    out << r.label << ',' << r.group << ',' << (r.sigma ? shortest(*r.sigma) : "") << ','
        << (r.seed ? std::to_string(*r.seed) : "");
    for (const double c : r.cash) out << ',' << format_money(c);
    out << ',' << format_money(r.total) << '\n';
  }
}

void write_sensitivity_median_csv(const SensitivityReport& report, std::ostream& out) {
  out << "group,runs,daa_eur,ida_eur,idc_eur,total_eur\n";
  for (const auto& m : report.medians) {
    out << m.group << ',' << m.runs;
    for (const double c : m.cash) out << ',' << format_money(c);
    out << ',' << format_money(m.total) << '\n';
  }
}

void write_sensitivity_table(const SensitivityReport& report, std::ostream& out) {
  std::vector<std::array<std::string, 6>> cells;
  cells.push_back({"Scenario", "Runs", "DAA EUR", "IDA EUR", "IDC EUR", "Total EUR"});
  for (const auto& m : report.medians) {
    cells.push_back({m.group, std::to_string(m.runs), format_money(m.cash[0]),
                     format_money(m.cash[1]), format_money(m.cash[2]), format_money(m.total)});
  }
  std::array<std::size_t, 6> width{};
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::string pad(width[c] - row[c].size(), ' ');
      if (c == 0) out << row[c] << pad;
      else out << "  " << pad << row[c];
    }
    out << '\n';
  }
}

}  // namespace cascade

#include "cascade/cascade.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "cascade/config.hpp"
#include "cascade/data_io.hpp"
#include "cascade/engine.hpp"
#include "cascade/error.hpp"
#include "cascade/reporting.hpp"
#include "cascade/sweep.hpp"

struct cascade_config {
  cascade::RunConfig config;
};

struct cascade_market {
  std::shared_ptr<const cascade::MarketData> data;
};

struct cascade_portfolio {
  cascade::Portfolio portfolio;
  std::shared_ptr<const cascade::MarketData> data;
};

namespace {

thread_local std::string last_error;

cascade_status status_of(cascade::ErrorKind kind) {
  using cascade::ErrorKind;
  switch (kind) {
    case ErrorKind::Config: return CASCADE_ERR_CONFIG;
    case ErrorKind::Data: return CASCADE_ERR_DATA;
    case ErrorKind::Validation:
    case ErrorKind::Index: return CASCADE_ERR_VALIDATION;
    case ErrorKind::Solver: return CASCADE_ERR_SOLVER;
    case ErrorKind::Bookkeeping: return CASCADE_ERR_BOOKKEEPING;
    case ErrorKind::Io: return CASCADE_ERR_IO;
  }
  return CASCADE_ERR_INTERNAL;
}

template <class F>
cascade_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return CASCADE_OK;
  } catch (const cascade::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    last_error = e.what();
    return CASCADE_ERR_IO;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CASCADE_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CASCADE_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return CASCADE_ERR_INTERNAL;
  }
}

cascade_status argument_error(const char* what) {
  last_error = what;
  return CASCADE_ERR_ARGUMENT;
}

std::vector<std::filesystem::path> to_paths(const char* const* paths, size_t n) {
  std::vector<std::filesystem::path> out;
  for (size_t i = 0; i < n; ++i) {
    if (paths[i] == nullptr) throw cascade::DataError("null data path");
    out.emplace_back(paths[i]);
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cascade::IoError("cannot write " + path.string());
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw cascade::IoError("failed writing " + path.string());
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  auto out = open_out(path);
  writer(out);
  close_out(out, path);
}

// Thrown from the solve observer to stop a replay at the requested event.
struct Captured {
  cascade::milp::Problem problem;
};

}  // namespace

extern "C" {

const char* cascade_last_error(void) { return last_error.c_str(); }

const char* cascade_version(void) { return "1.0.0"; }

const char* cascade_status_name(cascade_status status) {
  switch (status) {
    case CASCADE_OK: return "ok";
    case CASCADE_ERR_CONFIG: return "config error";
    case CASCADE_ERR_DATA: return "data error";
    case CASCADE_ERR_VALIDATION: return "validation error";
    case CASCADE_ERR_SOLVER: return "solver error";
    case CASCADE_ERR_BOOKKEEPING: return "bookkeeping error";
    case CASCADE_ERR_IO: return "i/o error";
    case CASCADE_ERR_INTERNAL: return "internal error";
    case CASCADE_ERR_ARGUMENT: return "invalid argument";
  }
  return "unknown status";
}

cascade_status cascade_config_default(cascade_config** out) {
  if (out == nullptr) return argument_error("null output pointer");
  *out = nullptr;
  return guarded([&] { *out = new cascade_config{}; });
}

cascade_status cascade_config_load(const char* path, cascade_config** out) {
  if (path == nullptr || out == nullptr) return argument_error("null argument");
  *out = nullptr;
  return guarded([&] { *out = new cascade_config{cascade::load_config(path)}; });
}

cascade_status cascade_config_set(cascade_config* config, const char* key, const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return argument_error("null argument");
  }
  return guarded([&] {
    cascade::RunConfig copy = config->config;
    copy.set(key, value);
    config->config = std::move(copy);
  });
}

void cascade_config_free(cascade_config* config) { delete config; }

cascade_status cascade_market_load(const cascade_config* config, const char* const* paths,
                                   size_t n_paths, cascade_market** out) {
  if (config == nullptr || out == nullptr || (paths == nullptr && n_paths > 0)) {
    return argument_error("null argument");
  }
  *out = nullptr;
  return guarded([&] {
    const auto files = to_paths(paths, n_paths);
    const auto timeline = config->config.resolve_timeline(files);
    auto data = std::make_shared<const cascade::MarketData>(
        cascade::load_market_csv(files, timeline));
    *out = new cascade_market{std::move(data)};
  });
}

cascade_status cascade_market_validate(const char* const* paths, size_t n_paths,
                                       size_t* hours_out) {
  if (paths == nullptr && n_paths > 0) return argument_error("null argument");
  return guarded([&] {
    const auto files = to_paths(paths, n_paths);
    const auto data = cascade::load_market_csv(files, cascade::infer_timeline(files));
    if (hours_out != nullptr) *hours_out = data.timeline.hours();
  });
}

cascade_status cascade_market_info(const cascade_market* market, size_t* hours, size_t* quarters,
                                   int* has_forecast_daa, int* has_forecast_ida,
                                   int* has_forecast_idc) {
  if (market == nullptr) return argument_error("null market");
  const auto& d = *market->data;
  if (hours) *hours = d.timeline.hours();
  if (quarters) *quarters = d.timeline.quarters();
  if (has_forecast_daa) *has_forecast_daa = d.daa_forecast.has_value();
  if (has_forecast_ida) *has_forecast_ida = d.ida_forecast.has_value();
  if (has_forecast_idc) *has_forecast_idc = d.id1_forecast.has_value();
  last_error.clear();
  return CASCADE_OK;
}

void cascade_market_free(cascade_market* market) { delete market; }

cascade_status cascade_run(const cascade_config* config, const cascade_market* market,
                           cascade_portfolio** out) {
  if (config == nullptr || market == nullptr || out == nullptr) {
    return argument_error("null argument");
  }
  *out = nullptr;
  return guarded([&] {
    const auto backtest = config->config.backtest(market->data->timeline);
    auto portfolio = cascade::run_backtest(backtest, *market->data);
    *out = new cascade_portfolio{std::move(portfolio), market->data};
  });
}

cascade_status cascade_portfolio_revenue(const cascade_portfolio* portfolio, double out[4]) {
  if (portfolio == nullptr || out == nullptr) return argument_error("null argument");
  for (size_t i = 0; i < cascade::kSegmentCount; ++i) {
    out[i] = portfolio->portfolio.cash_by_segment[i];
  }
  out[3] = portfolio->portfolio.revenue_total;
  last_error.clear();
  return CASCADE_OK;
}

cascade_status cascade_portfolio_trade_count(const cascade_portfolio* portfolio, size_t* out) {
  if (portfolio == nullptr || out == nullptr) return argument_error("null argument");
  *out = portfolio->portfolio.trades.size();
  last_error.clear();
  return CASCADE_OK;
}

cascade_status cascade_portfolio_write_reports(const cascade_portfolio* portfolio,
                                               const char* out_dir) {
  if (portfolio == nullptr || out_dir == nullptr) return argument_error("null argument");
  return guarded([&] {
    namespace fs = std::filesystem;
    const fs::path dir(out_dir);
    const auto& p = portfolio->portfolio;
    const auto& data = *portfolio->data;
    const auto& tl = data.timeline;
    fs::create_directories(dir / "traces");
    const auto report = cascade::revenue_report(p, tl);
    write_file(dir / "revenue.csv", [&](auto& o) { cascade::write_revenue_csv(report, o); });
    write_file(dir / "daily_revenue.csv",
               [&](auto& o) { cascade::write_daily_revenue_csv(report, o); });
    write_file(dir / "trades.csv", [&](auto& o) { cascade::write_trade_log_csv(p, tl, o); });
    write_file(dir / "soc.csv", [&](auto& o) { cascade::write_soc_csv(p, tl, o); });
    for (std::size_t d = 0; d < cascade::day_count(tl); ++d) {
      const auto trace = cascade::day_trace(p, data, d);
      const auto name = cascade::format_timestamp(tl.quarter_start(d * cascade::kQuartersPerDay),
                                                  tl.utc_offset())
                            .substr(0, 10);
      write_file(dir / "traces" / ("day_" + name + ".csv"),
                 [&](auto& o) { cascade::write_day_trace_csv(trace, tl.utc_offset(), o); });
    }
  });
}

void cascade_portfolio_free(cascade_portfolio* portfolio) { delete portfolio; }

cascade_status cascade_sweep(const cascade_config* config, const cascade_market* market,
                             const double* sigmas, size_t n_sigmas, const uint64_t* seeds,
                             size_t n_seeds, unsigned threads, const char* out_dir) {
  if (config == nullptr || market == nullptr || out_dir == nullptr ||
      (sigmas == nullptr && n_sigmas > 0) || (seeds == nullptr && n_seeds > 0)) {
    return argument_error("null argument");
  }
  return guarded([&] {
    namespace fs = std::filesystem;
    cascade::SweepOptions options;
    options.sigmas.assign(sigmas, sigmas + n_sigmas);
    if (n_seeds > 0) options.seeds.assign(seeds, seeds + n_seeds);
    else options.seeds = {config->config.seed};
    options.threads = threads == 0 ? 1 : threads;
    auto base = config->config.backtest(market->data->timeline);
    const auto report =
        cascade::sensitivity_report(cascade::run_sweep(base, *market->data, options));
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_file(dir / "sensitivity.csv",
               [&](auto& o) { cascade::write_sensitivity_csv(report, o); });
    write_file(dir / "sensitivity_median.csv",
               [&](auto& o) { cascade::write_sensitivity_median_csv(report, o); });
    write_file(dir / "sensitivity.txt",
               [&](auto& o) { cascade::write_sensitivity_table(report, o); });
  });
}

cascade_status cascade_dump_lp(const cascade_config* config, const cascade_market* market,
                               const char* event_id, const char* out_path) {
  if (config == nullptr || market == nullptr || event_id == nullptr || out_path == nullptr) {
    return argument_error("null argument");
  }
  using Kind = cascade::TradingEvent::Kind;
  const std::string id(event_id);
  Kind kind;
  std::size_t quarter = 0;
  if (id == "daa") {
    kind = Kind::DaaAuction;
  } else if (id == "ida") {
    kind = Kind::IdaAuction;
  } else if (id.rfind("idc:", 0) == 0) {
    kind = Kind::IdcQuarter;
    const char* first = id.data() + 4;
    const char* last = id.data() + id.size();
    const auto res = std::from_chars(first, last, quarter);
    if (first == last || res.ec != std::errc{} || res.ptr != last) {
      return argument_error("event id must be daa, ida or idc:<quarter>");
    }
  } else {
    return argument_error("event id must be daa, ida or idc:<quarter>");
  }

  return guarded([&] {
    const auto& data = *market->data;
    const auto backtest = config->config.backtest(data.timeline);
    if (kind == Kind::IdcQuarter && quarter >= data.timeline.quarters()) {
      throw cascade::IndexError("IDC quarter " + std::to_string(quarter) + " outside the " +
                                std::to_string(data.timeline.quarters()) + "-quarter timeline");
    }
    cascade::RunOptions options;
    options.observer = [&](const cascade::TradingEvent& event, const cascade::StrategyProblem& sp,
                           const cascade::milp::Solution&) {
      if (event.kind == kind && (kind != Kind::IdcQuarter || event.fire_index == quarter)) {
        throw Captured{sp.problem};
      }
    };
    try {
      cascade::run_backtest(backtest, data, options);
    } catch (const Captured& captured) {
      write_file(out_path, [&](auto& o) { cascade::milp::write_lp(captured.problem, o); });
      return;
    }
    throw cascade::ValidationError("event " + id + " was not reached");
  });
}

}  // extern "C"

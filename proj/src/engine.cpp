#include "cascade/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cascade/error.hpp"

namespace cascade {

namespace {

constexpr double kVolumeEpsilon = 1e-9;
constexpr double kCloseTolerance = 1e-6;

std::string event_label(const TradingEvent& event, const Timeline& timeline) {
  switch (event.kind) {
    case TradingEvent::Kind::DaaAuction: return "DAA auction";
    case TradingEvent::Kind::IdaAuction: return "IDA auction";
    case TradingEvent::Kind::IdcQuarter:
      return "IDC event at quarter " + std::to_string(event.fire_index) + " (" +
             format_timestamp(timeline.quarter_start(event.fire_index), timeline.utc_offset()) +
             ")";
  }
  return "event";
}

void check_mode(const ForecastMode& mode, MarketSegment segment) {
  if (mode.kind == ForecastMode::Kind::NoisyId1 && segment != MarketSegment::Idc) {
    throw ConfigError("noisy forecasts are only available for the IDC segment, not " +
                      std::string(to_string(segment)));
  }
  if (mode.kind == ForecastMode::Kind::NoisyId1 && (!std::isfinite(mode.sigma) || mode.sigma < 0)) {
    throw ConfigError("forecast noise sigma must be finite and >= 0");
  }
}

const ForecastMode& mode_of(const BacktestConfig& config, MarketSegment s) {
  switch (s) {
    case MarketSegment::Daa: return config.daa;
    case MarketSegment::Ida: return config.ida;
    case MarketSegment::Idc: return config.idc;
  }
  return config.daa;
}

void check_data(const BacktestConfig& config, const MarketData& data) {
  if (!(data.timeline == config.timeline)) {
    throw ConfigError("market data timeline does not match the backtest timeline");
  }
  data.validate();
  for (const auto s : kAllSegments) {
    if (mode_of(config, s).kind == ForecastMode::Kind::FromFile && !data.forecast(s)) {
      throw DataError("forecast rows for " + std::string(to_string(s)) +
                      " requested but not present in the data");
    }
  }
}

void add_trade(Settlement& out, MarketSegment segment, std::size_t index, Side side,
               double power, double dt, double price, std::size_t booked_at) {
  const double volume = power * dt;
  if (volume <= kVolumeEpsilon) return;
  Trade t{segment, index, side, volume, price, booked_at};
  out.cash += t.cash();
  out.trades.push_back(t);
}

// Net bought power per quarter contributed by a set of signals.
void add_net(std::vector<double>& net, const Signals& s) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    double value = s.new_charge[k] - s.new_dis[k];
    if (s.has_closing()) value += s.close_charge[k] - s.close_dis[k];
    if (s.segment == MarketSegment::Daa) {
      for (std::size_t j = 0; j < kQuartersPerHour; ++j) {
        net[(s.window_begin + k) * kQuartersPerHour + j] += value;
      }
    } else {
      net[s.window_begin + k] += value;
    }
  }
}

Signals solve_event(const BacktestConfig& config, const MarketData& data,
                    const TradingEvent& event, const Portfolio& portfolio,
                    const RunOptions& options) {
  StrategyProblem sp = build_event_problem(config, data, event, portfolio);
  milp::Solution solution;
  try {
    solution = milp::solve(sp.problem);
  } catch (const SolverError& e) {
    throw SolverError(event_label(event, config.timeline) + ": " + e.what());
  }
  if (!solution.optimal()) {
    throw SolverError(event_label(event, config.timeline) + " is " +
                      std::string(milp::to_string(solution.status)));
  }
  if (options.observer) options.observer(event, sp, solution);
  return extract_signals(sp, solution);
}

void book_signals(Portfolio& portfolio, const Signals& signals, const MarketData& data,
                  std::size_t booked_at) {
  auto settlement = settle(signals, data.actual(signals.segment), booked_at);
  portfolio.position_book = apply_trades_to_book(std::move(portfolio.position_book), signals);
  portfolio.cash_by_segment[index_of(signals.segment)] += settlement.cash;
  portfolio.revenue_total += settlement.cash;
  add_net(portfolio.net_by_segment[index_of(signals.segment)], signals);
  portfolio.trades.insert(portfolio.trades.end(), settlement.trades.begin(),
                          settlement.trades.end());
}

Portfolio empty_portfolio(const BacktestConfig& config) {
  Portfolio p;
  const std::size_t q = config.timeline.quarters();
  p.position_book = PositionBook(q);
  for (auto& net : p.net_by_segment) net.assign(q, 0.0);
  return p;
}

}  // namespace

void BacktestConfig::validate() const {
  battery.validate();
  if (!timeline.valid()) throw ConfigError("timeline must cover at least one hour");
  if (n_p == 0) throw ConfigError("IDC horizon n_p must be at least 1");
  check_mode(daa, MarketSegment::Daa);
  check_mode(ida, MarketSegment::Ida);
  check_mode(idc, MarketSegment::Idc);
}

Settlement settle(const Signals& signals, std::span<const double> actual_prices,
                  std::size_t booked_at) {
  if (signals.window_begin + signals.size() > actual_prices.size()) {
    throw IndexError("settlement prices cover " + std::to_string(actual_prices.size()) +
                     " periods, signals end at " +
                     std::to_string(signals.window_begin + signals.size()));
  }
  const double dt = signals.dt();
  Settlement out;
  for (std::size_t k = 0; k < signals.size(); ++k) {
    const std::size_t d = signals.window_begin + k;
    const double price = actual_prices[d];
    add_trade(out, signals.segment, d, Side::Buy, signals.new_charge[k], dt, price, booked_at);
    add_trade(out, signals.segment, d, Side::Sell, signals.new_dis[k], dt, price, booked_at);
    if (signals.has_closing()) {
      add_trade(out, signals.segment, d, Side::Buy, signals.close_charge[k], dt, price,
                booked_at);
      add_trade(out, signals.segment, d, Side::Sell, signals.close_dis[k], dt, price,
                booked_at);
    }
  }
  return out;
}

PositionBook apply_trades_to_book(PositionBook book, const Signals& signals) {
  if (signals.segment == MarketSegment::Daa) {
    add_hourly_to_book(book, signals);
    return book;
  }
  if (signals.window_begin + signals.size() > book.size()) {
    throw IndexError("signals end beyond the position book");
  }
  for (std::size_t k = 0; k < signals.size(); ++k) {
    const std::size_t q = signals.window_begin + k;
    double ch = book.charge[q] + signals.new_charge[k];
    double dis = book.discharge[q] + signals.new_dis[k];
    if (signals.has_closing()) {
      ch -= signals.close_dis[k];
      dis -= signals.close_charge[k];
    }
    if (ch < -kCloseTolerance || dis < -kCloseTolerance) {
      throw BookkeepingError("closing trade at quarter " + std::to_string(q) +
                             " exceeds the open position");
    }
    book.charge[q] = std::max(0.0, ch);
    book.discharge[q] = std::max(0.0, dis);
  }
  return book;
}

double physical_soc_at(const PositionBook& book, const BatteryParams& params,
                       std::size_t upto_q) {
  if (upto_q > book.size()) {
    throw IndexError("quarter " + std::to_string(upto_q) + " beyond the position book");
  }
  double e = params.e_init;
  for (std::size_t q = 0; q < upto_q; ++q) {
    e = step_soc(e, book.charge[q], book.discharge[q], kQuarterResolution, params);
  }
  return e;
}

SocTrajectory physical_soc_trajectory(const PositionBook& book, const BatteryParams& params) {
  SocTrajectory t;
  t.values.reserve(book.size() + 1);
  double e = params.e_init;
  t.values.push_back(e);
  for (std::size_t q = 0; q < book.size(); ++q) {
    e = step_soc(e, book.charge[q], book.discharge[q], kQuarterResolution, params);
    t.values.push_back(e);
  }
  return t;
}

Forecast event_forecast(const BacktestConfig& config, const MarketData& data,
                        const TradingEvent& event) {
  const MarketSegment segment = event.segment();
  const ForecastMode& mode = mode_of(config, segment);
  const auto& actual = data.actual(segment);
  if (event.window_end() > actual.size()) {
    throw IndexError("event window extends beyond the market data");
  }
  const std::span<const double> window(actual.data() + event.window_begin, event.window_length);

  Forecast f;
  f.segment = segment;
  switch (mode.kind) {
    case ForecastMode::Kind::Perfect: f.values = perfect_forecast(window); break;
    case ForecastMode::Kind::FromFile: {
      const auto& series = data.forecast(segment);
      if (!series) {
        throw DataError("no forecast rows for " + std::string(to_string(segment)));
      }
      f.values.assign(series->begin() + static_cast<std::ptrdiff_t>(event.window_begin),
                      series->begin() + static_cast<std::ptrdiff_t>(event.window_end()));
      break;
    }
    case ForecastMode::Kind::NoisyId1:
      f.values = noisy_id1_forecast(window, mode.sigma, mode.seed, event.fire_index);
      break;
  }
  return f;
}

StrategyProblem build_event_problem(const BacktestConfig& config, const MarketData& data,
                                    const TradingEvent& event, const Portfolio& portfolio) {
  const Forecast forecast = event_forecast(config, data, event);
  switch (event.kind) {
    case TradingEvent::Kind::DaaAuction: return build_daa(config.battery, forecast);
    case TradingEvent::Kind::IdaAuction:
      return build_ida(config.battery, forecast, portfolio.position_book);
    case TradingEvent::Kind::IdcQuarter: {
      const double e = physical_soc_at(portfolio.position_book, config.battery, event.fire_index);
      return build_idc(config.battery, forecast, portfolio.position_book, e, event.fire_index,
                       config.n_p, config.timeline);
    }
  }
  throw ValidationError("unknown trading event");
}

Portfolio run_auctions(const BacktestConfig& config, const MarketData& data,
                       const RunOptions& options) {
  config.validate();
  check_data(config, data);
  Portfolio portfolio = empty_portfolio(config);
  for (const auto& event : build_event_calendar(config.timeline, config.n_p)) {
    if (event.kind == TradingEvent::Kind::IdcQuarter) break;
    const Signals signals = solve_event(config, data, event, portfolio, options);
    book_signals(portfolio, signals, data, event.fire_index);
  }
  portfolio.soc_trajectory = physical_soc_trajectory(portfolio.position_book, config.battery);
  return portfolio;
}

Portfolio run_continuous(const BacktestConfig& config, const MarketData& data,
                         Portfolio portfolio, const RunOptions& options) {
  config.validate();
  check_data(config, data);
  if (portfolio.position_book.size() != config.timeline.quarters()) {
    throw ValidationError("portfolio does not match the backtest timeline");
  }
  const auto& params = config.battery;
  // Quarters before the current event are frozen, so the physical SOC at the
  // event start can be advanced one quarter at a time.
  double e = params.e_init;
  std::size_t e_at = 0;
  for (const auto& event : build_event_calendar(config.timeline, config.n_p)) {
    if (event.kind != TradingEvent::Kind::IdcQuarter) continue;
    const std::size_t q_i = event.fire_index;
    const auto& book = portfolio.position_book;
    for (; e_at < q_i; ++e_at) {
      e = step_soc(e, book.charge[e_at], book.discharge[e_at], kQuarterResolution, params);
    }
    const Forecast forecast = event_forecast(config, data, event);
    StrategyProblem sp =
        build_idc(params, forecast, book, e, q_i, config.n_p, config.timeline);
    milp::Solution solution;
    try {
      solution = milp::solve(sp.problem);
    } catch (const SolverError& err) {
      throw SolverError(event_label(event, config.timeline) + ": " + err.what());
    }
    if (!solution.optimal()) {
      throw SolverError(event_label(event, config.timeline) + " is " +
                        std::string(milp::to_string(solution.status)));
    }
    if (options.observer) options.observer(event, sp, solution);
    book_signals(portfolio, extract_signals(sp, solution), data, q_i);
  }
  portfolio.soc_trajectory = physical_soc_trajectory(portfolio.position_book, params);
  return portfolio;
}

Portfolio run_backtest(const BacktestConfig& config, const MarketData& data,
                       const RunOptions& options) {
  return run_continuous(config, data, run_auctions(config, data, options), options);
}

}  // namespace cascade

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cascade/battery.hpp"
#include "cascade/milp.hpp"
#include "cascade/timeline.hpp"

namespace cascade {

struct Forecast {
  MarketSegment segment = MarketSegment::Daa;
  std::vector<double> values;  // EUR/MWh over the event window; may be negative
};

// Gross positions per delivery quarter, accumulated over all markets. Charge
// is bought energy, discharge sold energy, both in MW.
struct PositionBook {
  std::vector<double> charge;
  std::vector<double> discharge;

  PositionBook() = default;
  explicit PositionBook(std::size_t quarters) : charge(quarters, 0.0), discharge(quarters, 0.0) {}

  std::size_t size() const noexcept { return charge.size(); }
  double net(std::size_t q) const { return charge[q] - discharge[q]; }
};

// Trading decision of one event, in MW over [window_begin, window_begin + size).
// Closing arrays are empty for DAA.
struct Signals {
  MarketSegment segment = MarketSegment::Daa;
  std::size_t window_begin = 0;
  std::vector<double> new_charge;
  std::vector<double> new_dis;
  std::vector<double> close_charge;
  std::vector<double> close_dis;
  double objective = 0.0;  // forecast-valued cost of the decision, EUR

  std::size_t size() const noexcept { return new_charge.size(); }
  double dt() const noexcept { return resolution_hours(segment); }
  bool has_closing() const noexcept { return !close_charge.empty(); }
};

// A built strategy optimisation together with the handles needed to read the
// trading decision back out of a solution.
struct StrategyProblem {
  MarketSegment segment = MarketSegment::Daa;
  std::size_t window_begin = 0;
  std::size_t periods = 0;
  milp::Problem problem;
  std::vector<milp::VarId> new_charge;
  std::vector<milp::VarId> new_dis;
  std::vector<milp::VarId> close_charge;  // empty for DAA
  std::vector<milp::VarId> close_dis;     // empty for DAA
  std::vector<milp::VarId> soc;           // periods + 1 entries
  std::vector<milp::VarId> mode;          // binary charge indicator per period
  // Existing positions the problem was built around (zero for DAA), MW.
  std::vector<double> existing_charge;
  std::vector<double> existing_dis;
};

// Hourly day-ahead schedule over the forecast horizon.
StrategyProblem build_daa(const BatteryParams& params, const Forecast& forecast);

// Quarter-hourly intraday auction over the full book, trading new positions
// and closing existing ones.
StrategyProblem build_ida(const BatteryParams& params, const Forecast& forecast,
                          const PositionBook& daa_position);

// Rolling continuous-market window starting at q_i. forecast.values covers the
// window, e_init_window is the physical SOC at q_i.
StrategyProblem build_idc(const BatteryParams& params, const Forecast& forecast,
                          const PositionBook& book, double e_init_window, std::size_t q_i,
                          std::size_t n_p, const Timeline& timeline);

// Throws ValidationError for non-optimal solutions.
Signals extract_signals(const StrategyProblem& problem, const milp::Solution& solution);

// Spreads an hourly DAA decision onto the quarter grid of a book.
void add_hourly_to_book(PositionBook& book, const Signals& daa_signals);

// Post-hoc audit of a solved strategy problem: simultaneous charge and
// discharge, SOC consistency with step_soc, SOC bounds, cycle budgets and
// closing limits. Returns human-readable findings (empty when clean).
std::vector<std::string> audit_strategy_solution(const StrategyProblem& problem,
                                                 const milp::Solution& solution,
                                                 const BatteryParams& params,
                                                 double tolerance = milp::kTolerance);

}  // namespace cascade

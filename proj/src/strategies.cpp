#include "cascade/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cascade/error.hpp"

namespace cascade {

namespace {

using milp::Sense;
using milp::Term;
using milp::VarId;

// Positions may exceed p_max by solver noise only.
constexpr double kPositionSlack = 1e-6;
// Solver values below this are read back as exactly zero.
constexpr double kZeroSnap = 1e-9;

std::string indexed(const char* prefix, const char* name, std::size_t i) {
  return std::string(prefix) + "_" + name + "[" + std::to_string(i) + "]";
}

double clamp_start_soc(double e_start, const BatteryParams& params) {
  if (e_start < -kPositionSlack || e_start > params.e_max + kPositionSlack) {
    throw ValidationError("initial SOC " + std::to_string(e_start) + " outside [0, e_max]");
  }
  return std::clamp(e_start, 0.0, params.e_max);
}

struct QuarterInputs {
  MarketSegment segment;
  const char* prefix;
  std::size_t window_begin;
  std::span<const double> prices;
  std::span<const double> existing_charge;
  std::span<const double> existing_dis;
  double e_start;
  double charge_budget;     // stored volume allowed over the window, MWh
  double discharge_budget;  // withdrawn volume allowed over the window, MWh
  double final_soc_lower;
  double final_soc_upper;
};

// Shared formulation of the intraday auction and the continuous-market
// window: new and closing trades on top of fixed existing positions.
StrategyProblem build_quarter_problem(const BatteryParams& params, const QuarterInputs& in) {
  const std::size_t n = in.prices.size();
  const double dt = kQuarterResolution;
  const double p_max = params.p_max;
  const double retention = params.retention(dt);
  const double ch_gain = params.eta_ch * dt;    // MWh stored per MW bought
  const double dis_cost = dt / params.eta_dis;  // MWh withdrawn per MW sold

  StrategyProblem sp;
  sp.segment = in.segment;
  sp.window_begin = in.window_begin;
  sp.periods = n;
  sp.existing_charge.assign(in.existing_charge.begin(), in.existing_charge.end());
  sp.existing_dis.assign(in.existing_dis.begin(), in.existing_dis.end());
  auto& lp = sp.problem;

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t q = in.window_begin + k;
    const double ex_ch = in.existing_charge[k];
    const double ex_dis = in.existing_dis[k];
    if (ex_ch < -kPositionSlack || ex_dis < -kPositionSlack ||
        ex_ch > p_max + kPositionSlack || ex_dis > p_max + kPositionSlack) {
      throw ValidationError("existing position at quarter " + std::to_string(q) +
                            " outside [0, p_max]");
    }
    const double room_ch = std::max(0.0, p_max - ex_ch);
    const double room_dis = std::max(0.0, p_max - ex_dis);
    sp.new_charge.push_back(lp.add_continuous(indexed(in.prefix, "ch", q), 0.0, room_ch));
    sp.new_dis.push_back(lp.add_continuous(indexed(in.prefix, "dis", q), 0.0, room_dis));
    sp.close_charge.push_back(
        lp.add_continuous(indexed(in.prefix, "close_ch", q), 0.0, std::max(0.0, ex_dis)));
    sp.close_dis.push_back(
        lp.add_continuous(indexed(in.prefix, "close_dis", q), 0.0, std::max(0.0, ex_ch)));
  }
  for (std::size_t k = 0; k <= n; ++k) {
    const bool last = k == n;
    sp.soc.push_back(lp.add_continuous(indexed(in.prefix, "soc", in.window_begin + k),
                                       last ? in.final_soc_lower : 0.0,
                                       last ? in.final_soc_upper : params.e_max));
  }
  for (std::size_t k = 0; k < n; ++k) {
    sp.mode.push_back(lp.add_binary(indexed(in.prefix, "x", in.window_begin + k)));
  }

  lp.add_constraint("soc_init", {{sp.soc[0], 1.0}}, Sense::Equal, in.e_start);

  std::vector<Term> charge_budget;
  std::vector<Term> discharge_budget;
  double existing_stored = 0.0;
  double existing_withdrawn = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t q = in.window_begin + k;
    const double ex_ch = std::max(0.0, in.existing_charge[k]);
    const double ex_dis = std::max(0.0, in.existing_dis[k]);
    const VarId ch = sp.new_charge[k];
    const VarId dis = sp.new_dis[k];
    const VarId cch = sp.close_charge[k];
    const VarId cdis = sp.close_dis[k];

    // Delivered charge is ex_ch - close_dis + ch, delivered discharge is
    // ex_dis - close_ch + dis.
    lp.add_constraint("soc_step[" + std::to_string(q) + "]",
                      {{sp.soc[k + 1], 1.0},
                       {sp.soc[k], -retention},
                       {ch, -ch_gain},
                       {cdis, ch_gain},
                       {dis, dis_cost},
                       {cch, -dis_cost}},
                      Sense::Equal, ch_gain * ex_ch - dis_cost * ex_dis);
    lp.add_constraint("charge_mode[" + std::to_string(q) + "]",
                      {{ch, 1.0}, {cdis, -1.0}, {sp.mode[k], -p_max}}, Sense::LessEqual,
                      -ex_ch);
    lp.add_constraint("discharge_mode[" + std::to_string(q) + "]",
                      {{dis, 1.0}, {cch, -1.0}, {sp.mode[k], p_max}}, Sense::LessEqual,
                      p_max - ex_dis);

    charge_budget.push_back({ch, ch_gain});
    charge_budget.push_back({cdis, -ch_gain});
    discharge_budget.push_back({dis, dis_cost});
    discharge_budget.push_back({cch, -dis_cost});
    existing_stored += ch_gain * ex_ch;
    existing_withdrawn += dis_cost * ex_dis;

    const double c = in.prices[k] * dt;
    lp.add_objective_term(ch, c);
    lp.add_objective_term(dis, -c);
    lp.add_objective_term(cch, c);
    lp.add_objective_term(cdis, -c);
  }
  lp.add_constraint("charge_budget", std::move(charge_budget), Sense::LessEqual,
                    in.charge_budget - existing_stored);
  lp.add_constraint("discharge_budget", std::move(discharge_budget), Sense::LessEqual,
                    in.discharge_budget - existing_withdrawn);
  return sp;
}

double positive(double x) { return x < kZeroSnap ? 0.0 : x; }

}  // namespace

StrategyProblem build_daa(const BatteryParams& params, const Forecast& forecast) {
  params.validate();
  const std::size_t hours = forecast.values.size();
  if (hours == 0) throw ConfigError("DAA forecast must cover at least one hour");

  const double dt = kHourlyResolution;
  const double retention = params.retention(dt);
  const double weight = hourly_power_weight(params);
  const double budget = params.cycle_budget(static_cast<double>(hours), 24.0);

  StrategyProblem sp;
  sp.segment = MarketSegment::Daa;
  sp.periods = hours;
  sp.existing_charge.assign(hours, 0.0);
  sp.existing_dis.assign(hours, 0.0);
  auto& lp = sp.problem;

  for (std::size_t h = 0; h < hours; ++h) {
    sp.new_charge.push_back(lp.add_continuous(indexed("daa", "ch", h), 0.0, params.p_max));
    sp.new_dis.push_back(lp.add_continuous(indexed("daa", "dis", h), 0.0, params.p_max));
  }
  for (std::size_t h = 0; h <= hours; ++h) {
    sp.soc.push_back(lp.add_continuous(indexed("daa", "soc", h), 0.0, params.e_max));
  }
  for (std::size_t h = 0; h < hours; ++h) {
    sp.mode.push_back(lp.add_binary(indexed("daa", "x", h)));
  }

  lp.add_constraint("soc_init", {{sp.soc[0], 1.0}}, Sense::Equal, params.e_init);
  std::vector<Term> charge_budget;
  std::vector<Term> discharge_budget;
  for (std::size_t h = 0; h < hours; ++h) {
    const auto tag = "[" + std::to_string(h) + "]";
    lp.add_constraint("soc_step" + tag,
                      {{sp.soc[h + 1], 1.0},
                       {sp.soc[h], -retention},
                       {sp.new_charge[h], -weight * params.eta_ch * dt},
                       {sp.new_dis[h], weight * dt / params.eta_dis}},
                      Sense::Equal, 0.0);
    lp.add_constraint("charge_mode" + tag, {{sp.new_charge[h], 1.0}, {sp.mode[h], -params.p_max}},
                      Sense::LessEqual, 0.0);
    lp.add_constraint("discharge_mode" + tag,
                      {{sp.new_dis[h], 1.0}, {sp.mode[h], params.p_max}}, Sense::LessEqual,
                      params.p_max);
    charge_budget.push_back({sp.new_charge[h], dt * params.eta_ch});
    discharge_budget.push_back({sp.new_dis[h], dt / params.eta_dis});
    lp.add_objective_term(sp.new_charge[h], forecast.values[h]);
    lp.add_objective_term(sp.new_dis[h], -forecast.values[h]);
  }
  lp.add_constraint("charge_budget", std::move(charge_budget), Sense::LessEqual, budget);
  lp.add_constraint("discharge_budget", std::move(discharge_budget), Sense::LessEqual, budget);
  return sp;
}

StrategyProblem build_ida(const BatteryParams& params, const Forecast& forecast,
                          const PositionBook& daa_position) {
  params.validate();
  const std::size_t quarters = forecast.values.size();
  if (quarters == 0) throw ConfigError("IDA forecast must cover at least one quarter");
  if (daa_position.charge.size() != quarters || daa_position.discharge.size() != quarters) {
    throw ValidationError("DAA position covers " + std::to_string(daa_position.size()) +
                          " quarters, IDA forecast " + std::to_string(quarters));
  }
  const double budget =
      params.cycle_budget(static_cast<double>(quarters), static_cast<double>(kQuartersPerDay));
  return build_quarter_problem(
      params, QuarterInputs{MarketSegment::Ida, "ida", 0, forecast.values, daa_position.charge,
                            daa_position.discharge, clamp_start_soc(params.e_init, params),
                            budget, budget, 0.0, params.e_max});
}

StrategyProblem build_idc(const BatteryParams& params, const Forecast& forecast,
                          const PositionBook& book, double e_init_window, std::size_t q_i,
                          std::size_t n_p, const Timeline& timeline) {
  params.validate();
  const std::size_t quarters = timeline.quarters();
  if (q_i >= quarters) {
    throw ValidationError("IDC window start " + std::to_string(q_i) + " outside the timeline");
  }
  const std::size_t width = std::min(n_p, quarters - q_i);
  if (width == 0) throw ValidationError("IDC window is empty");
  if (forecast.values.size() != width) {
    throw ValidationError("IDC forecast covers " + std::to_string(forecast.values.size()) +
                          " quarters, window " + std::to_string(width));
  }
  if (book.size() != quarters) {
    throw ValidationError("position book covers " + std::to_string(book.size()) +
                          " quarters, timeline " + std::to_string(quarters));
  }

  const double dt = kQuarterResolution;
  const std::span<const double> ex_ch(book.charge.data() + q_i, width);
  const std::span<const double> ex_dis(book.discharge.data() + q_i, width);

  // Window-proportional cycle budget; volumes already committed inside the
  // window stay admissible even when they exceed it.
  const double window_budget =
      params.cycle_budget(static_cast<double>(width), static_cast<double>(kQuartersPerDay));
  double committed_stored = 0.0;
  double committed_withdrawn = 0.0;
  for (std::size_t k = 0; k < width; ++k) {
    committed_stored += params.eta_ch * dt * std::max(0.0, ex_ch[k]);
    committed_withdrawn += dt / params.eta_dis * std::max(0.0, ex_dis[k]);
  }

  // The schedule already booked behind the window must stay physically
  // feasible from whatever SOC the window ends at: E_end * r^k + c_k within
  // [0, e_max] for every later quarter.
  double lower = 0.0;
  double upper = params.e_max;
  const double retention = params.retention(dt);
  double drift = 0.0;
  double decay = 1.0;
  for (std::size_t q = q_i + width; q < quarters; ++q) {
    drift = step_soc(drift, book.charge[q], book.discharge[q], dt, params);
    decay *= retention;
    lower = std::max(lower, -drift / decay);
    upper = std::min(upper, (params.e_max - drift) / decay);
  }
  // A tail that fills or empties the battery exactly pins the window-end SOC;
  // rounding can then leave lower a hair above upper.
  lower = std::max(0.0, lower - kZeroSnap);
  upper = std::min(params.e_max, upper + kZeroSnap);
  if (lower > upper) lower = upper = 0.5 * (lower + upper);

  return build_quarter_problem(
      params, QuarterInputs{MarketSegment::Idc, "idc", q_i, forecast.values, ex_ch, ex_dis,
                            clamp_start_soc(e_init_window, params),
                            std::max(window_budget, committed_stored),
                            std::max(window_budget, committed_withdrawn), lower, upper});
}

Signals extract_signals(const StrategyProblem& sp, const milp::Solution& solution) {
  if (!solution.optimal()) {
    throw ValidationError("cannot extract " + std::string(to_string(sp.segment)) +
                          " signals from a " + std::string(milp::to_string(solution.status)) +
                          " solution");
  }
  const auto& vars = sp.problem.variables();
  auto read = [&](milp::VarId id) {
    const auto& v = vars[id.index];
    return positive(std::clamp(solution.value(id), v.lower, v.upper));
  };

  Signals s;
  s.segment = sp.segment;
  s.window_begin = sp.window_begin;
  s.objective = solution.objective_value;
  const std::size_t n = sp.periods;
  s.new_charge.resize(n);
  s.new_dis.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    s.new_charge[k] = read(sp.new_charge[k]);
    s.new_dis[k] = read(sp.new_dis[k]);
  }
  if (sp.close_charge.empty()) return s;

  s.close_charge.resize(n);
  s.close_dis.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double buy = s.new_charge[k];
    double sell_back = read(sp.close_dis[k]);
    double sell = s.new_dis[k];
    double buy_back = read(sp.close_charge[k]);
    // A new buy and a closing sell in the same quarter cancel at the same
    // price; keep only the net leg (same for the opposite pair).
    const double wash_ch = std::min(buy, sell_back);
    buy -= wash_ch;
    sell_back -= wash_ch;
    const double wash_dis = std::min(sell, buy_back);
    sell -= wash_dis;
    buy_back -= wash_dis;
    s.new_charge[k] = positive(buy);
    s.close_dis[k] = positive(sell_back);
    s.new_dis[k] = positive(sell);
    s.close_charge[k] = positive(buy_back);
  }
  return s;
}

void add_hourly_to_book(PositionBook& book, const Signals& daa) {
  if (daa.segment != MarketSegment::Daa) {
    throw ValidationError("add_hourly_to_book expects DAA signals");
  }
  for (std::size_t h = 0; h < daa.size(); ++h) {
    for (std::size_t j = 0; j < kQuartersPerHour; ++j) {
      const std::size_t q = (daa.window_begin + h) * kQuartersPerHour + j;
      if (q >= book.size()) throw IndexError("DAA hour " + std::to_string(h) + " beyond book");
      book.charge[q] += daa.new_charge[h];
      book.discharge[q] += daa.new_dis[h];
    }
  }
}

std::vector<std::string> audit_strategy_solution(const StrategyProblem& sp,
                                                 const milp::Solution& solution,
                                                 const BatteryParams& params,
                                                 double tolerance) {
  std::vector<std::string> findings;
  for (const auto& v : milp::check_solution(sp.problem, solution, tolerance)) {
    findings.push_back(v.what + " violated by " + std::to_string(v.magnitude));
  }
  if (!solution.optimal()) {
    findings.push_back("solution is not optimal");
    return findings;
  }

  const bool hourly = sp.segment == MarketSegment::Daa;
  const double dt = resolution_hours(sp.segment);
  const std::size_t n = sp.periods;
  auto at = [&](const std::vector<milp::VarId>& ids, std::size_t k) {
    return ids.empty() ? 0.0 : solution.value(ids[k]);
  };

  double stored = 0.0;
  double withdrawn = 0.0;
  double committed_stored = 0.0;
  double committed_withdrawn = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto where = std::string(to_string(sp.segment)) + " period " +
                       std::to_string(sp.window_begin + k);
    const double ch = sp.existing_charge[k] - at(sp.close_dis, k) + at(sp.new_charge, k);
    const double dis = sp.existing_dis[k] - at(sp.close_charge, k) + at(sp.new_dis, k);
    if (ch > tolerance && dis > tolerance) {
      findings.push_back(where + ": simultaneous charge " + std::to_string(ch) +
                         " and discharge " + std::to_string(dis));
    }
    if (!sp.close_charge.empty()) {
      if (at(sp.close_charge, k) > sp.existing_dis[k] + tolerance) {
        findings.push_back(where + ": closing buy exceeds existing sell position");
      }
      if (at(sp.close_dis, k) > sp.existing_charge[k] + tolerance) {
        findings.push_back(where + ": closing sell exceeds existing buy position");
      }
    }

    const double e0 = solution.value(sp.soc[k]);
    double e1 = e0;
    if (hourly) {
      for (std::size_t j = 0; j < kQuartersPerHour; ++j) {
        e1 = step_soc(e1, ch, dis, kQuarterResolution, params);
      }
    } else {
      e1 = step_soc(e0, ch, dis, dt, params);
    }
    const double modelled = solution.value(sp.soc[k + 1]);
    if (std::abs(e1 - modelled) > tolerance) {
      findings.push_back(where + ": SOC " + std::to_string(modelled) +
                         " differs from recomputed " + std::to_string(e1));
    }
    stored += ch * params.eta_ch * dt;
    withdrawn += dis / params.eta_dis * dt;
    committed_stored += sp.existing_charge[k] * params.eta_ch * dt;
    committed_withdrawn += sp.existing_dis[k] / params.eta_dis * dt;
  }
  for (std::size_t k = 0; k <= n; ++k) {
    const double e = solution.value(sp.soc[k]);
    if (e < -tolerance || e > params.e_max + tolerance) {
      findings.push_back("SOC " + std::to_string(e) + " outside [0, e_max] at step " +
                         std::to_string(k));
    }
  }

  const double per_day = hourly ? 24.0 : static_cast<double>(kQuartersPerDay);
  double budget_ch = params.cycle_budget(static_cast<double>(n), per_day);
  double budget_dis = budget_ch;
  if (sp.segment == MarketSegment::Idc) {
    budget_ch = std::max(budget_ch, committed_stored);
    budget_dis = std::max(budget_dis, committed_withdrawn);
  }
  if (stored > budget_ch + tolerance) {
    findings.push_back("charge volume " + std::to_string(stored) + " exceeds cycle budget " +
                       std::to_string(budget_ch));
  }
  if (withdrawn > budget_dis + tolerance) {
    findings.push_back("discharge volume " + std::to_string(withdrawn) +
                       " exceeds cycle budget " + std::to_string(budget_dis));
  }
  return findings;
}

}  // namespace cascade

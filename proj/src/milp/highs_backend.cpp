// MILP solve contract backed by the HiGHS branch-and-cut solver.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "Highs.h"
#include "cascade/error.hpp"
#include "cascade/milp.hpp"

namespace cascade::milp {

namespace {

HighsLp to_highs(const Problem& problem) {
  const auto& vars = problem.variables();
  const auto& rows = problem.constraints();
  HighsLp lp;
  lp.num_col_ = static_cast<HighsInt>(vars.size());
  lp.num_row_ = static_cast<HighsInt>(rows.size());
  lp.sense_ = ObjSense::kMinimize;
  lp.offset_ = problem.objective_constant();
  lp.col_cost_.assign(vars.size(), 0.0);
  for (const auto& t : problem.objective()) lp.col_cost_[t.var.index] += t.coef;

  lp.col_lower_.reserve(vars.size());
  lp.col_upper_.reserve(vars.size());
  lp.integrality_.reserve(vars.size());
  bool any_integer = false;
  for (const auto& v : vars) {
    lp.col_lower_.push_back(v.lower);
    lp.col_upper_.push_back(v.upper);
    const bool binary = v.kind == VarKind::Binary;
    any_integer = any_integer || binary;
    lp.integrality_.push_back(binary ? HighsVarType::kInteger : HighsVarType::kContinuous);
  }
  if (!any_integer) lp.integrality_.clear();

  // Row-wise assembly; repeated references to a variable within one
  // constraint are summed.
  auto& a = lp.a_matrix_;
  a.format_ = MatrixFormat::kRowwise;
  a.num_col_ = lp.num_col_;
  a.num_row_ = lp.num_row_;
  a.start_.assign(1, 0);
  std::map<std::uint32_t, double> merged;
  for (const auto& c : rows) {
    merged.clear();
    for (const auto& t : c.terms) merged[t.var.index] += t.coef;
    for (const auto& [index, coef] : merged) {
      if (coef == 0.0) continue;
      a.index_.push_back(static_cast<HighsInt>(index));
      a.value_.push_back(coef);
    }
    a.start_.push_back(static_cast<HighsInt>(a.index_.size()));
    switch (c.sense) {
      case Sense::LessEqual:
        lp.row_lower_.push_back(-kHighsInf);
        lp.row_upper_.push_back(c.rhs);
        break;
      case Sense::GreaterEqual:
        lp.row_lower_.push_back(c.rhs);
        lp.row_upper_.push_back(kHighsInf);
        break;
      case Sense::Equal:
        lp.row_lower_.push_back(c.rhs);
        lp.row_upper_.push_back(c.rhs);
        break;
    }
  }
  a.ensureColwise();
  return lp;
}

void configure(Highs& highs) {
  highs.setOptionValue("output_flag", false);
  highs.setOptionValue("threads", 1);
  highs.setOptionValue("random_seed", 0);
  highs.setOptionValue("mip_rel_gap", 0.0);
  highs.setOptionValue("mip_abs_gap", 1e-7);
  highs.setOptionValue("mip_feasibility_tolerance", 1e-9);
  highs.setOptionValue("primal_feasibility_tolerance", 1e-9);
  highs.setOptionValue("dual_feasibility_tolerance", 1e-9);
}

HighsModelStatus run(Highs& highs, const HighsLp& lp) {
  configure(highs);
  if (highs.passModel(lp) == HighsStatus::kError) {
    throw SolverError("HiGHS rejected the model");
  }
  if (highs.run() == HighsStatus::kError) {
    throw SolverError("HiGHS failed: " + highs.modelStatusToString(highs.getModelStatus()));
  }
  return highs.getModelStatus();
}

// Distinguishes the two cases HiGHS may lump together by re-solving with a
// zero objective.
Status resolve_ambiguous(HighsLp lp) {
  std::fill(lp.col_cost_.begin(), lp.col_cost_.end(), 0.0);
  Highs highs;
  const auto status = run(highs, lp);
  if (status == HighsModelStatus::kOptimal) return Status::Unbounded;
  if (status == HighsModelStatus::kInfeasible) return Status::Infeasible;
  throw SolverError("could not classify an infeasible-or-unbounded problem");
}

Status classify(HighsModelStatus status, const HighsLp& lp) {
  switch (status) {
    case HighsModelStatus::kInfeasible: return Status::Infeasible;
    case HighsModelStatus::kUnbounded: return Status::Unbounded;
    case HighsModelStatus::kUnboundedOrInfeasible: return resolve_ambiguous(lp);
    default:
      throw SolverError("HiGHS stopped with status '" + Highs().modelStatusToString(status) +
                        "'");
  }
}

void record(const Highs& highs, SolveStats* stats) {
  if (stats == nullptr) return;
  const auto& info = highs.getInfo();
  stats->lp_iterations +=
      static_cast<std::size_t>(std::max<int64_t>(0, info.simplex_iteration_count));
  stats->nodes += static_cast<std::size_t>(std::max<int64_t>(0, info.mip_node_count));
}

Solution finish(const Problem& problem, std::vector<double> values) {
  Solution out;
  out.status = Status::Optimal;
  out.values = std::move(values);
  const auto& vars = problem.variables();
  for (std::size_t i = 0; i < vars.size(); ++i) {
    auto& x = out.values[i];
    if (vars[i].kind == VarKind::Binary) x = std::round(x);
    x = std::clamp(x, vars[i].lower, vars[i].upper);
  }
  out.objective_value = problem.evaluate_objective(out.values);
  return out;
}

// Rounds the binaries of an optimal LP-relaxation point one at a time,
// keeping every constraint that mentions the binary satisfied. If the
// resulting point is feasible and still attains the relaxation bound it is
// an optimal MILP solution, since the relaxation bounds the MILP from below.
std::optional<Solution> rounding_certificate(const Problem& problem, std::vector<double> values,
                                             double relaxation_bound) {
  constexpr double kRowSlack = 1e-7;
  const auto& vars = problem.variables();
  const auto& rows = problem.constraints();
  std::vector<std::vector<std::size_t>> rows_of(vars.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& t : rows[r].terms) {
      if (vars[t.var.index].kind == VarKind::Binary) rows_of[t.var.index].push_back(r);
    }
  }
  auto row_holds = [&](std::size_t r) {
    const auto& c = rows[r];
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * values[t.var.index];
    switch (c.sense) {
      case Sense::LessEqual: return lhs <= c.rhs + kRowSlack;
      case Sense::GreaterEqual: return lhs >= c.rhs - kRowSlack;
      case Sense::Equal: return std::abs(lhs - c.rhs) <= kRowSlack;
    }
    return false;
  };

  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (vars[j].kind != VarKind::Binary) continue;
    const double nearest = std::clamp(std::round(values[j]), vars[j].lower, vars[j].upper);
    const double other = std::clamp(1.0 - nearest, vars[j].lower, vars[j].upper);
    bool placed = false;
    for (const double candidate : {nearest, other}) {
      values[j] = candidate;
      if (std::all_of(rows_of[j].begin(), rows_of[j].end(), row_holds)) {
        placed = true;
        break;
      }
    }
    if (!placed) return std::nullopt;
  }
  Solution out = finish(problem, std::move(values));
  if (out.objective_value > relaxation_bound + kRowSlack) return std::nullopt;
  if (!check_solution(problem, out).empty()) return std::nullopt;
  return out;
}

}  // namespace

Solution solve(const Problem& problem, SolveStats* stats) {
  problem.validate();
  Solution out;
  if (problem.num_variables() == 0) {
    for (const auto& c : problem.constraints()) {
      const bool ok = (c.sense == Sense::LessEqual && 0.0 <= c.rhs + kTolerance) ||
                      (c.sense == Sense::GreaterEqual && 0.0 >= c.rhs - kTolerance) ||
                      (c.sense == Sense::Equal && std::abs(c.rhs) <= kTolerance);
      if (!ok) return out;
    }
    out.status = Status::Optimal;
    out.objective_value = problem.objective_constant();
    return out;
  }

  const HighsLp lp = to_highs(problem);
  if (!lp.integrality_.empty()) {
    HighsLp relaxed = lp;
    relaxed.integrality_.clear();
    Highs highs;
    const auto relaxed_status = run(highs, relaxed);
    record(highs, stats);
    if (relaxed_status == HighsModelStatus::kInfeasible) {
      out.status = Status::Infeasible;
      return out;
    }
    if (relaxed_status == HighsModelStatus::kOptimal) {
      const double bound = problem.evaluate_objective(highs.getSolution().col_value);
      if (auto certified = rounding_certificate(problem, highs.getSolution().col_value, bound)) {
        return *std::move(certified);
      }
    }
  }

  Highs highs;
  const auto model_status = run(highs, lp);
  record(highs, stats);
  if (model_status != HighsModelStatus::kOptimal) {
    out.status = classify(model_status, lp);
    return out;
  }
  out = finish(problem, highs.getSolution().col_value);

  const auto violations = check_solution(problem, out);
  if (!violations.empty()) {
    throw SolverError("solver returned an assignment violating " + violations.front().what +
                      " by " + std::to_string(violations.front().magnitude));
  }
  return out;
}

}  // namespace cascade::milp

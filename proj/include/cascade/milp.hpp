#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace cascade::milp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
// Feasibility, integrality and optimality tolerance of the solve contract.
inline constexpr double kTolerance = 1e-6;

enum class VarKind { Continuous, Binary };
enum class Sense { LessEqual, GreaterEqual, Equal };

struct VarId {
  std::uint32_t index = 0;
  friend bool operator==(VarId, VarId) = default;
};

struct Term {
  VarId var;
  double coef = 0.0;
};

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = kInfinity;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

// Minimisation problem over continuous and binary variables. Terms refer to
// variables by the VarId returned from add_variable.
class Problem {
 public:
  VarId add_variable(std::string name, VarKind kind, double lower, double upper);
  VarId add_continuous(std::string name, double lower, double upper) {
    return add_variable(std::move(name), VarKind::Continuous, lower, upper);
  }
  VarId add_binary(std::string name) {
    return add_variable(std::move(name), VarKind::Binary, 0.0, 1.0);
  }

  void add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs);
  void set_objective(std::vector<Term> terms, double constant = 0.0);
  // Adds coef * var to the objective.
  void add_objective_term(VarId var, double coef);
  void set_bounds(VarId var, double lower, double upper);

  const std::vector<Variable>& variables() const noexcept { return variables_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  const std::vector<Term>& objective() const noexcept { return objective_; }
  double objective_constant() const noexcept { return objective_constant_; }
  const Variable& variable(VarId id) const { return variables_.at(id.index); }
  std::size_t num_variables() const noexcept { return variables_.size(); }
  std::size_t num_binaries() const noexcept;

  // Throws ValidationError on undeclared variables, non-finite coefficients,
  // crossed bounds or binaries with bounds other than {0, 1}.
  void validate() const;

  double evaluate_objective(const std::vector<double>& values) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<Term> objective_;
  double objective_constant_ = 0.0;
};

enum class Status { Optimal, Infeasible, Unbounded };

std::string_view to_string(Status status) noexcept;

struct Solution {
  Status status = Status::Infeasible;
  double objective_value = 0.0;
  std::vector<double> values;  // indexed by VarId::index

  bool optimal() const noexcept { return status == Status::Optimal; }
  double value(VarId id) const { return values.at(id.index); }
  // Throws ValidationError when no variable carries this name.
  double value(const Problem& problem, std::string_view name) const;
};

struct SolveStats {
  std::size_t lp_iterations = 0;
  std::size_t nodes = 0;
};

// Exact solve: returns an optimal assignment (objective within kTolerance of
// the optimum), or Infeasible / Unbounded. Throws ValidationError for
// malformed problems and SolverError when the numerics break down.
Solution solve(const Problem& problem, SolveStats* stats = nullptr);

struct Violation {
  std::string what;
  double magnitude = 0.0;
};

// Independent audit of a solution: every bound, constraint and integrality
// requirement violated by more than `tolerance`.
std::vector<Violation> check_solution(const Problem& problem, const Solution& solution,
                                      double tolerance = kTolerance);

// CPLEX LP text format.
void write_lp(const Problem& problem, std::ostream& out);

}  // namespace cascade::milp

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "cascade/error.hpp"
#include "cascade/milp.hpp"

namespace cascade::milp {

std::string_view to_string(Status status) noexcept {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

VarId Problem::add_variable(std::string name, VarKind kind, double lower, double upper) {
  variables_.push_back({std::move(name), kind, lower, upper});
  return VarId{static_cast<std::uint32_t>(variables_.size() - 1)};
}

void Problem::add_constraint(std::string name, std::vector<Term> terms, Sense sense,
                             double rhs) {
  constraints_.push_back({std::move(name), std::move(terms), sense, rhs});
}

void Problem::set_objective(std::vector<Term> terms, double constant) {
  objective_ = std::move(terms);
  objective_constant_ = constant;
}

void Problem::add_objective_term(VarId var, double coef) { objective_.push_back({var, coef}); }

void Problem::set_bounds(VarId var, double lower, double upper) {
  auto& v = variables_.at(var.index);
  v.lower = lower;
  v.upper = upper;
}

std::size_t Problem::num_binaries() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      variables_.begin(), variables_.end(),
      [](const Variable& v) { return v.kind == VarKind::Binary; }));
}

void Problem::validate() const {
  const auto n = variables_.size();
  for (const auto& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper ||
        v.lower == kInfinity || v.upper == -kInfinity) {
      throw ValidationError("variable '" + v.name + "' has invalid bounds");
    }
    if (v.kind == VarKind::Binary && (v.lower < 0.0 || v.upper > 1.0)) {
      throw ValidationError("binary variable '" + v.name + "' must have bounds within {0, 1}");
    }
  }
  auto check_terms = [n](const std::vector<Term>& terms, const std::string& where) {
    for (const auto& t : terms) {
      if (t.var.index >= n) {
        throw ValidationError(where + " references undeclared variable #" +
                              std::to_string(t.var.index));
      }
      if (!std::isfinite(t.coef)) throw ValidationError(where + " has a non-finite coefficient");
    }
  };
  check_terms(objective_, "objective");
  if (!std::isfinite(objective_constant_)) {
    throw ValidationError("objective constant is not finite");
  }
  for (const auto& c : constraints_) {
    check_terms(c.terms, "constraint '" + c.name + "'");
    if (!std::isfinite(c.rhs)) {
      throw ValidationError("constraint '" + c.name + "' has a non-finite right-hand side");
    }
  }
}

double Problem::evaluate_objective(const std::vector<double>& values) const {
  double sum = objective_constant_;
  for (const auto& t : objective_) sum += t.coef * values.at(t.var.index);
  return sum;
}

double Solution::value(const Problem& problem, std::string_view name) const {
  const auto& vars = problem.variables();
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name == name) return values.at(i);
  }
  throw ValidationError("no variable named '" + std::string(name) + "'");
}

std::vector<Violation> check_solution(const Problem& problem, const Solution& solution,
                                      double tolerance) {
  std::vector<Violation> out;
  const auto& vars = problem.variables();
  if (solution.values.size() != vars.size()) {
    out.push_back({"assignment has " + std::to_string(solution.values.size()) +
                       " values for " + std::to_string(vars.size()) + " variables",
                   kInfinity});
    return out;
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto& v = vars[i];
    const double x = solution.values[i];
    if (!std::isfinite(x)) {
      out.push_back({"variable '" + v.name + "' is not finite", kInfinity});
      continue;
    }
    if (x < v.lower - tolerance) out.push_back({"lower bound of '" + v.name + "'", v.lower - x});
    if (x > v.upper + tolerance) out.push_back({"upper bound of '" + v.name + "'", x - v.upper});
    if (v.kind == VarKind::Binary) {
      const double frac = std::abs(x - std::round(x));
      if (frac > tolerance) out.push_back({"integrality of '" + v.name + "'", frac});
    }
  }
  for (const auto& c : problem.constraints()) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * solution.values[t.var.index];
    double excess = 0.0;
    switch (c.sense) {
      case Sense::LessEqual: excess = lhs - c.rhs; break;
      case Sense::GreaterEqual: excess = c.rhs - lhs; break;
      case Sense::Equal: excess = std::abs(lhs - c.rhs); break;
    }
    if (excess > tolerance) out.push_back({"constraint '" + c.name + "'", excess});
  }
  return out;
}

namespace {

// LP-format identifiers may not contain brackets or start with a digit.
std::string lp_name(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char ch : name) {
    if (ch == '[') {
      out += '(';
    } else if (ch == ']') {
      out += ')';
    } else if (ch == ' ' || ch == ':' || ch == '\\') {
      out += '_';
    } else {
      out += ch;
    }
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) out.insert(0, "v");
  return out;
}

std::string lp_number(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

void write_terms(std::ostream& out, const Problem& problem, const std::vector<Term>& terms) {
  if (terms.empty()) {
    out << " 0 " << lp_name(problem.variables().front().name);
    return;
  }
  std::size_t on_line = 0;
  for (const auto& t : terms) {
    out << (t.coef < 0.0 ? " - " : " + ") << lp_number(std::abs(t.coef)) << ' '
        << lp_name(problem.variable(t.var).name);
    if (++on_line % 6 == 0) out << "\n   ";
  }
}

}  // namespace

void write_lp(const Problem& problem, std::ostream& out) {
  problem.validate();
  out << "\\ " << problem.num_variables() << " variables, " << problem.constraints().size()
      << " constraints, " << problem.num_binaries() << " binaries\n";
  if (problem.objective_constant() != 0.0) {
    out << "\\ objective constant " << lp_number(problem.objective_constant()) << '\n';
  }
  out << "Minimize\n obj:";
  if (problem.num_variables() > 0) write_terms(out, problem, problem.objective());
  out << "\nSubject To\n";
  for (const auto& c : problem.constraints()) {
    out << ' ' << lp_name(c.name) << ':';
    write_terms(out, problem, c.terms);
    switch (c.sense) {
      case Sense::LessEqual: out << " <= "; break;
      case Sense::GreaterEqual: out << " >= "; break;
      case Sense::Equal: out << " = "; break;
    }
    out << lp_number(c.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : problem.variables()) {
    if (v.kind == VarKind::Binary && v.lower == 0.0 && v.upper == 1.0) continue;
    const auto name = lp_name(v.name);
    if (v.lower == v.upper) {
      out << ' ' << name << " = " << lp_number(v.lower) << '\n';
    } else if (v.lower == -kInfinity && v.upper == kInfinity) {
      out << ' ' << name << " free\n";
    } else {
      out << ' ' << (v.lower == -kInfinity ? std::string("-inf") : lp_number(v.lower))
          << " <= " << name << " <= "
          << (v.upper == kInfinity ? std::string("+inf") : lp_number(v.upper)) << '\n';
    }
  }
  bool any_binary = false;
  for (const auto& v : problem.variables()) {
    if (v.kind != VarKind::Binary) continue;
    if (!any_binary) out << "Binaries\n";
    any_binary = true;
    out << ' ' << lp_name(v.name) << '\n';
  }
  out << "End\n";
}

}  // namespace cascade::milp

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "Highs.h"
#include "cascade/error.hpp"
#include "cascade/milp.hpp"

namespace cascade::milp {
namespace {

TEST(Solve, SingleContinuousVariable) {
  Problem p;
  const auto x = p.add_continuous("x", 0.0, 1.0);
  p.add_objective_term(x, -1.0);
  const auto s = solve(p);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.value(x), 1.0, 1e-9);
  EXPECT_NEAR(s.objective_value, -1.0, 1e-9);
}

TEST(Solve, ExactlyOneOfTwoBinaries) {
  Problem p;
  const auto x = p.add_binary("x");
  const auto y = p.add_binary("y");
  p.set_objective({{x, -1.0}, {y, -1.0}});
  p.add_constraint("pick", {{x, 1.0}, {y, 1.0}}, Sense::LessEqual, 1.0);
  const auto s = solve(p);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective_value, -1.0, 1e-9);
  EXPECT_NEAR(s.value(x) + s.value(y), 1.0, 1e-9);
}

TEST(Solve, TwoPeriodArbitrage) {
  // prices [0, 100], 1 MW / 1 MWh, lossless, empty start
  Problem p;
  const double price[2] = {0.0, 100.0};
  VarId ch[2], dis[2], e[3];
  for (int t = 0; t < 3; ++t) e[t] = p.add_continuous("e" + std::to_string(t), 0.0, 1.0);
  for (int t = 0; t < 2; ++t) {
    ch[t] = p.add_continuous("ch" + std::to_string(t), 0.0, 1.0);
    dis[t] = p.add_continuous("dis" + std::to_string(t), 0.0, 1.0);
    p.add_objective_term(ch[t], price[t]);
    p.add_objective_term(dis[t], -price[t]);
    p.add_constraint("step" + std::to_string(t), {{e[t + 1], 1}, {e[t], -1}, {ch[t], -1}, {dis[t], 1}},
                     Sense::Equal, 0.0);
  }
  p.add_constraint("init", {{e[0], 1}}, Sense::Equal, 0.0);
  const auto s = solve(p);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective_value, -100.0, 1e-9);
  EXPECT_NEAR(s.value(ch[0]), 1.0, 1e-9);
  EXPECT_NEAR(s.value(dis[1]), 1.0, 1e-9);
}

TEST(Solve, Infeasible) {
  Problem p;
  const auto x = p.add_binary("x");
  p.add_constraint("c", {{x, 1.0}}, Sense::GreaterEqual, 2.0);
  EXPECT_EQ(solve(p).status, Status::Infeasible);
}

TEST(Solve, InfeasibleContinuous) {
  Problem p;
  const auto x = p.add_continuous("x", 0.0, 5.0);
  const auto y = p.add_continuous("y", 0.0, 5.0);
  p.add_constraint("a", {{x, 1.0}, {y, 1.0}}, Sense::GreaterEqual, 11.0);
  EXPECT_EQ(solve(p).status, Status::Infeasible);
}

TEST(Solve, Unbounded) {
  Problem p;
  const auto x = p.add_continuous("x", 0.0, kInfinity);
  const auto b = p.add_binary("b");
  p.set_objective({{x, -1.0}, {b, 1.0}});
  EXPECT_EQ(solve(p).status, Status::Unbounded);
}

TEST(Solve, EmptyProblem) {
  Problem p;
  const auto s = solve(p);
  EXPECT_TRUE(s.optimal());
  EXPECT_EQ(s.objective_value, 0.0);
}

TEST(Solve, MalformedProblemIsAValidationError) {
  Problem p;
  p.add_continuous("x", 2.0, 1.0);
  EXPECT_THROW(solve(p), ValidationError);
  Problem q;
  q.add_continuous("x", 0.0, 1.0);
  q.add_constraint("c", {{VarId{7}, 1.0}}, Sense::LessEqual, 1.0);
  EXPECT_THROW(solve(q), ValidationError);
  Problem r;
  const auto x = r.add_continuous("x", 0.0, 1.0);
  r.add_objective_term(x, std::nan(""));
  EXPECT_THROW(solve(r), ValidationError);
}

TEST(CheckSolution, UpperBoundViolation) {
  Problem p;
  p.add_continuous("x", 0.0, 1.0);
  Solution s;
  s.status = Status::Optimal;
  s.values = {1.5};
  const auto v = check_solution(p, s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NEAR(v[0].magnitude, 0.5, 1e-12);
}

TEST(CheckSolution, FractionalBinary) {
  Problem p;
  p.add_binary("b");
  Solution s;
  s.status = Status::Optimal;
  s.values = {0.5};
  const auto v = check_solution(p, s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].what.find("integrality"), std::string::npos);
}

TEST(CheckSolution, ConstraintViolation) {
  Problem p;
  const auto x = p.add_continuous("x", 0.0, 10.0);
  const auto y = p.add_continuous("y", 0.0, 10.0);
  p.add_constraint("sum", {{x, 1.0}, {y, 1.0}}, Sense::Equal, 3.0);
  Solution s;
  s.status = Status::Optimal;
  s.values = {1.0, 1.0};
  const auto v = check_solution(p, s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NEAR(v[0].magnitude, 1.0, 1e-12);
  s.values = {1.0, 2.0};
  EXPECT_TRUE(check_solution(p, s).empty());
}

// Random problems with a few binaries gating continuous variables.
Problem random_problem(std::mt19937_64& rng, int binaries) {
  std::uniform_real_distribution<double> coef(-10.0, 10.0);
  std::uniform_real_distribution<double> pos(0.5, 5.0);
  std::uniform_int_distribution<int> pick(0, 1);
  Problem p;
  std::vector<VarId> b, y;
  for (int j = 0; j < binaries; ++j) b.push_back(p.add_binary("b" + std::to_string(j)));
  for (int j = 0; j < binaries; ++j) {
    y.push_back(p.add_continuous("y" + std::to_string(j), 0.0, pos(rng)));
    p.add_constraint("gate" + std::to_string(j), {{y[j], 1.0}, {b[j], -4.0}}, Sense::LessEqual,
                     0.0);
    p.add_objective_term(y[j], coef(rng));
    p.add_objective_term(b[j], coef(rng) / 3.0);
  }
  for (int r = 0; r < binaries / 2 + 1; ++r) {
    std::vector<Term> terms;
    for (int j = 0; j < binaries; ++j) {
      if (pick(rng)) terms.push_back({y[j], pos(rng)});
      if (pick(rng)) terms.push_back({b[j], pos(rng)});
    }
    if (!terms.empty()) p.add_constraint("cap" + std::to_string(r), terms, Sense::LessEqual, 6.0);
  }
  std::vector<Term> demand;
  for (int j = 0; j < binaries; ++j) demand.push_back({y[j], 1.0});
  p.add_constraint("demand", demand, Sense::GreaterEqual, 0.5);
  return p;
}

// The same problem with every binary fixed to the given pattern.
Problem with_fixed_binaries(const Problem& p, unsigned pattern) {
  Problem q;
  unsigned bit = 0;
  for (const auto& v : p.variables()) {
    if (v.kind == VarKind::Binary) {
      const double value = (pattern >> bit++) & 1u;
      q.add_continuous(v.name, value, value);
    } else {
      q.add_continuous(v.name, v.lower, v.upper);
    }
  }
  for (const auto& c : p.constraints()) q.add_constraint(c.name, c.terms, c.sense, c.rhs);
  q.set_objective(p.objective(), p.objective_constant());
  return q;
}

TEST(Solve, MatchesEnumerationOverBinaryPatterns) {
  std::mt19937_64 rng(2024);
  int compared = 0;
  for (int round = 0; round < 40; ++round) {
    const int n = round < 36 ? 2 + round % 8 : 12;
    const Problem p = random_problem(rng, n);
    double best = kInfinity;
    for (unsigned pattern = 0; pattern < (1u << n); ++pattern) {
      const auto s = solve(with_fixed_binaries(p, pattern));
      if (s.optimal()) best = std::min(best, s.objective_value);
    }
    const auto s = solve(p);
    if (best == kInfinity) {
      EXPECT_EQ(s.status, Status::Infeasible);
      continue;
    }
    ASSERT_TRUE(s.optimal()) << "round " << round;
    EXPECT_NEAR(s.objective_value, best, 1e-6) << "round " << round << ", " << n << " binaries";
    EXPECT_TRUE(check_solution(p, s).empty());
    ++compared;
  }
  EXPECT_GE(compared, 30);
}

TEST(Solve, Deterministic) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 10; ++i) {
    const Problem p = random_problem(rng, 10);
    const auto a = solve(p);
    const auto b = solve(p);
    ASSERT_EQ(a.status, b.status);
    EXPECT_EQ(a.objective_value, b.objective_value);
    EXPECT_EQ(a.values, b.values);
  }
}

TEST(WriteLp, ReadBackGivesTheSameOptimum) {
  std::mt19937_64 rng(9);
  const Problem p = random_problem(rng, 8);
  const auto path = std::filesystem::temp_directory_path() / "cascade_milp_test.lp";
  {
    std::ofstream out(path);
    write_lp(p, out);
  }
  Highs highs;
  highs.setOptionValue("output_flag", false);
  ASSERT_NE(highs.readModel(path.string()), HighsStatus::kError);
  ASSERT_NE(highs.run(), HighsStatus::kError);
  ASSERT_EQ(highs.getModelStatus(), HighsModelStatus::kOptimal);
  EXPECT_NEAR(highs.getInfo().objective_function_value, solve(p).objective_value, 1e-6);
  std::filesystem::remove(path);
}

TEST(WriteLp, SectionsAndBracketFreeNames) {
  Problem p;
  const auto x = p.add_continuous("ch[3]", 0.0, 2.0);
  const auto b = p.add_binary("x[3]");
  p.add_objective_term(x, 1.5);
  p.add_constraint("mode[3]", {{x, 1.0}, {b, -2.0}}, Sense::LessEqual, 0.0);
  std::ostringstream out;
  write_lp(p, out);
  const auto text = out.str();
  for (const char* section : {"Minimize", "Subject To", "Bounds", "End"}) {
    EXPECT_NE(text.find(section), std::string::npos) << section;
  }
  EXPECT_EQ(text.find('['), std::string::npos);
  EXPECT_NE(text.find("ch(3)"), std::string::npos);
}

}  // namespace
}  // namespace cascade::milp

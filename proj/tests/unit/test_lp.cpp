#include <functional>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "superhedge/lp.hpp"

namespace superhedge {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

double dual_objective(const LinearProgram& lp, const LpSolution& s) {
  double total = 0.0;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) total += lp.rhs()[i] * s.duals(static_cast<Eigen::Index>(i));
  return total;
}

TEST(Simplex, SolvesSmallProblem) {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18.
  LinearProgram lp(2);
  lp.set_objective(vec({-3, -5}));
  lp.add_row(vec({1, 0}), RowSense::kLessEqual, 4);
  lp.add_row(vec({0, 2}), RowSense::kLessEqual, 12);
  lp.add_row(vec({3, 2}), RowSense::kLessEqual, 18);
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, -36.0, 1e-12);
  EXPECT_NEAR(s.x(0), 2.0, 1e-12);
  EXPECT_NEAR(s.x(1), 6.0, 1e-12);
  EXPECT_NEAR(dual_objective(lp, s), s.objective, 1e-10);
}

TEST(Simplex, DetectsInfeasibility) {
  LinearProgram lp(1);
  lp.set_objective(vec({1}));
  lp.add_row(vec({1}), RowSense::kGreaterEqual, 2);
  lp.add_row(vec({1}), RowSense::kLessEqual, 1);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::kInfeasible);
}

TEST(Simplex, DetectsUnboundedness) {
  LinearProgram lp(2);
  lp.set_objective(vec({-1, 0}));
  lp.add_row(vec({1, -1}), RowSense::kLessEqual, 1);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::kUnbounded);
}

TEST(Simplex, HandlesFreeVariablesAndEqualities) {
  // min x + y with x free, x - y = -3, y >= 0 -> x = -3, y = 0.
  LinearProgram lp(2);
  lp.set_objective(vec({1, 1}));
  lp.set_bound(0, VarBound::kFree);
  lp.add_row(vec({1, -1}), RowSense::kEqual, -3);
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, -3.0, 1e-12);
  EXPECT_NEAR(dual_objective(lp, s), -3.0, 1e-12);
}

TEST(Simplex, TerminatesOnCyclingExample) {
  // Classic degenerate instance that cycles under the textbook pivot rule.
  LinearProgram lp(4);
  lp.set_objective(vec({-0.75, 20, -0.5, 6}));
  lp.add_row(vec({0.25, -8, -1, 9}), RowSense::kLessEqual, 0);
  lp.add_row(vec({0.5, -12, -0.5, 3}), RowSense::kLessEqual, 0);
  lp.add_row(vec({0, 0, 1, 0}), RowSense::kLessEqual, 1);
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, -1.25, 1e-12);
}

TEST(Simplex, DualsAreSignFeasible) {
  LinearProgram lp(2);
  lp.set_objective(vec({2, 3}));
  lp.add_row(vec({1, 1}), RowSense::kGreaterEqual, 4);
  lp.add_row(vec({1, 3}), RowSense::kGreaterEqual, 6);
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 9.0, 1e-12);
  EXPECT_GE(s.duals(0), -1e-12);
  EXPECT_GE(s.duals(1), -1e-12);
  Eigen::VectorXd reduced = lp.objective();
  for (std::size_t i = 0; i < lp.num_rows(); ++i) reduced -= s.duals(static_cast<Eigen::Index>(i)) * lp.rows()[i];
  EXPECT_GE(reduced.minCoeff(), -1e-12);
}

// Random box-constrained problems against vertex enumeration of the
// feasible region.
TEST(Simplex, MatchesVertexEnumerationOnRandomBoxes) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 2;
    const int m = 2 + trial % 3;
    std::vector<Eigen::VectorXd> a;
    std::vector<double> b;
    for (int j = 0; j < n; ++j) {
      a.push_back(Eigen::VectorXd::Unit(n, j));
      b.push_back(1.0);
      a.push_back(-Eigen::VectorXd::Unit(n, j));
      b.push_back(0.0);
    }
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd row(n);
      for (int j = 0; j < n; ++j) row(j) = coef(rng);
      a.push_back(row);
      b.push_back(0.2 + 0.5 * (coef(rng) + 1.0));
    }
    Eigen::VectorXd c(n);
    for (int j = 0; j < n; ++j) c(j) = coef(rng);

    LinearProgram lp(static_cast<std::size_t>(n));
    lp.set_objective(c);
    for (std::size_t i = 2 * n; i < a.size(); ++i) lp.add_row(a[i], RowSense::kLessEqual, b[i]);
    for (int j = 0; j < n; ++j) lp.add_row(Eigen::VectorXd::Unit(n, j), RowSense::kLessEqual, 1.0);
    const LpSolution s = solve_lp(lp);
    ASSERT_EQ(s.status, LpStatus::kOptimal);

    double best = std::numeric_limits<double>::infinity();
    const int total = static_cast<int>(a.size());
    std::vector<int> pick(static_cast<std::size_t>(n));
    const std::function<void(int, int)> choose = [&](int start, int depth) {
      if (depth == n) {
        Eigen::MatrixXd sys(n, n);
        Eigen::VectorXd rhs(n);
        for (int k = 0; k < n; ++k) {
          sys.row(k) = a[pick[k]].transpose();
          rhs(k) = b[pick[k]];
        }
        const auto e = oracle::eliminate(sys, rhs);
        if (e.rank != n || !e.consistent) return;
        for (int i = 0; i < total; ++i) {
          if (a[i].dot(e.solution) > b[i] + 1e-9) return;
        }
        best = std::min(best, c.dot(e.solution));
        return;
      }
      for (int i = start; i < total; ++i) {
        pick[depth] = i;
        choose(i + 1, depth + 1);
      }
    };
    choose(0, 0);
    EXPECT_NEAR(s.objective, best, 1e-9) << "trial " << trial;
    EXPECT_NEAR(dual_objective(lp, s), s.objective, 1e-9) << "trial " << trial;
  }
}

}  // namespace
}  // namespace superhedge

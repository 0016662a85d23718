#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace superhedge {

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };
enum class VarBound { kNonNegative, kFree };

/// Dense linear program in the form
///
///   minimize  c'x   subject to  a_i'x (<=, >=, =) b_i,  x_j >= 0 or free.
///
/// Rows are appended with add_row(); the objective and variable bounds are
/// sized at construction.
class LinearProgram {
 public:
  explicit LinearProgram(std::size_t num_vars);

  std::size_t num_vars() const { return objective_.size(); }
  std::size_t num_rows() const { return rhs_.size(); }

  void set_objective(const Eigen::VectorXd& c);
  void set_bound(std::size_t var, VarBound bound) { bounds_.at(var) = bound; }
  std::size_t add_row(const Eigen::VectorXd& coeffs, RowSense sense, double rhs);

  const Eigen::VectorXd& objective() const { return objective_; }
  const std::vector<Eigen::VectorXd>& rows() const { return rows_; }
  const std::vector<RowSense>& senses() const { return senses_; }
  const std::vector<double>& rhs() const { return rhs_; }
  const std::vector<VarBound>& bounds() const { return bounds_; }

 private:
  Eigen::VectorXd objective_;
  std::vector<Eigen::VectorXd> rows_;
  std::vector<RowSense> senses_;
  std::vector<double> rhs_;
  std::vector<VarBound> bounds_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  // Lagrange multipliers, one per row: c - A'y is sign-feasible and
  // b'y equals the optimal objective.
  Eigen::VectorXd duals;
  int iterations = 0;
  bool used_bland = false;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-11;
  int max_iterations = 100000;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int bland_after_degenerate = 50;
};

/// Two-phase dense tableau simplex. Dantzig pricing, falling back to
/// Bland's rule after a run of degenerate pivots so it cannot cycle.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace superhedge

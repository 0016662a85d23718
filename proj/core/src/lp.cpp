#include "superhedge/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace superhedge {

LinearProgram::LinearProgram(std::size_t num_vars)
    : objective_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_vars))),
      bounds_(num_vars, VarBound::kNonNegative) {}

void LinearProgram::set_objective(const Eigen::VectorXd& c) {
  if (c.size() != objective_.size()) {
    throw std::invalid_argument("objective has wrong dimension");
  }
  objective_ = c;
}

std::size_t LinearProgram::add_row(const Eigen::VectorXd& coeffs,
                                   RowSense sense, double rhs) {
  if (coeffs.size() != objective_.size()) {
    throw std::invalid_argument("constraint row has wrong dimension");
  }
  rows_.push_back(coeffs);
  senses_.push_back(sense);
  rhs_.push_back(rhs);
  return rows_.size() - 1;
}

namespace {

enum class ColumnKind { kStructural, kSlack, kArtificial };

class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& options)
      : opt_(options) {
    const auto n = static_cast<Eigen::Index>(lp.num_vars());
    const auto m = static_cast<Eigen::Index>(lp.num_rows());

    // Structural columns: one per nonnegative variable, two per free one.
    plus_col_.resize(n);
    minus_col_.assign(n, -1);
    Eigen::Index ncols = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      plus_col_[j] = ncols++;
      if (lp.bounds()[j] == VarBound::kFree) minus_col_[j] = ncols++;
    }
    num_structural_ = ncols;

    // Normalize to nonnegative right-hand sides.
    flip_.assign(m, 1.0);
    std::vector<RowSense> sense(lp.senses());
    for (Eigen::Index i = 0; i < m; ++i) {
      if (lp.rhs()[i] < 0.0) {
        flip_[i] = -1.0;
        if (sense[i] == RowSense::kLessEqual) {
          sense[i] = RowSense::kGreaterEqual;
        } else if (sense[i] == RowSense::kGreaterEqual) {
          sense[i] = RowSense::kLessEqual;
        }
      }
    }

    // Every row gets exactly one identity column (slack or artificial);
    // GE rows additionally get a surplus column.
    std::vector<Eigen::Index> surplus_col(m, -1);
    identity_col_.assign(m, -1);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (sense[i] == RowSense::kGreaterEqual) surplus_col[i] = ncols++;
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      identity_col_[i] = ncols++;
    }
    kind_.assign(ncols, ColumnKind::kStructural);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (surplus_col[i] >= 0) kind_[surplus_col[i]] = ColumnKind::kSlack;
      kind_[identity_col_[i]] = sense[i] == RowSense::kLessEqual
                                    ? ColumnKind::kSlack
                                    : ColumnKind::kArtificial;
    }

    rhs_col_ = ncols;
    t_ = Eigen::MatrixXd::Zero(m + 1, ncols + 1);
    cost_ = Eigen::VectorXd::Zero(ncols);
    for (Eigen::Index j = 0; j < n; ++j) {
      cost_(plus_col_[j]) = lp.objective()(j);
      if (minus_col_[j] >= 0) cost_(minus_col_[j]) = -lp.objective()(j);
    }
    basis_.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::VectorXd& row = lp.rows()[i];
      for (Eigen::Index j = 0; j < n; ++j) {
        t_(i, plus_col_[j]) = flip_[i] * row(j);
        if (minus_col_[j] >= 0) t_(i, minus_col_[j]) = -flip_[i] * row(j);
      }
      if (surplus_col[i] >= 0) t_(i, surplus_col[i]) = -1.0;
      t_(i, identity_col_[i]) = 1.0;
      t_(i, rhs_col_) = flip_[i] * lp.rhs()[i];
      basis_[i] = identity_col_[i];
    }
  }

  LpSolution run(const LinearProgram& lp) {
    LpSolution sol;
    const Eigen::Index m = t_.rows() - 1;

    bool has_artificial = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (kind_[basis_[i]] == ColumnKind::kArtificial) has_artificial = true;
    }

    if (has_artificial) {
      Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cost_.size());
      for (Eigen::Index j = 0; j < cost_.size(); ++j) {
        if (kind_[j] == ColumnKind::kArtificial) phase1(j) = 1.0;
      }
      load_objective(phase1);
      const LpStatus st = iterate(sol);
      if (st == LpStatus::kIterationLimit) {
        sol.status = st;
        return sol;
      }
      double scale = 1.0;
      for (double b : lp.rhs()) scale = std::max(scale, std::abs(b));
      if (-t_(m, rhs_col_) > opt_.feasibility_tol * scale) {
        sol.status = LpStatus::kInfeasible;
        return sol;
      }
      drive_out_artificials();
    }

    load_objective(cost_);
    const LpStatus st = iterate(sol);
    sol.status = st;
    if (st != LpStatus::kOptimal) return sol;

    extract(lp, sol);
    return sol;
  }

 private:
  void load_objective(const Eigen::VectorXd& c) {
    const Eigen::Index m = t_.rows() - 1;
    t_.row(m).setZero();
    for (Eigen::Index j = 0; j < c.size(); ++j) t_(m, j) = c(j);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double cb = c(basis_[i]);
      if (cb != 0.0) t_.row(m) -= cb * t_.row(i);
    }
  }

  bool may_enter(Eigen::Index j) const {
    return kind_[j] != ColumnKind::kArtificial;
  }

  void pivot(Eigen::Index p, Eigen::Index q) {
    const double piv = t_(p, q);
    Eigen::RowVectorXd prow = t_.row(p) / piv;
    prow(q) = 1.0;
    Eigen::VectorXd col = t_.col(q);
    col(p) = 0.0;
    t_.noalias() -= col * prow;
    t_.row(p) = prow;
    t_.col(q).setZero();
    t_(p, q) = 1.0;
    basis_[p] = q;
  }

  LpStatus iterate(LpSolution& sol) {
    const Eigen::Index m = t_.rows() - 1;
    const Eigen::Index ncols = rhs_col_;
    int degenerate_run = 0;
    while (true) {
      if (sol.iterations >= opt_.max_iterations) return LpStatus::kIterationLimit;

      Eigen::Index q = -1;
      double best = -opt_.optimality_tol;
      for (Eigen::Index j = 0; j < ncols; ++j) {
        if (!may_enter(j)) continue;
        const double d = t_(m, j);
        if (bland_) {
          if (d < -opt_.optimality_tol) {
            q = j;
            break;
          }
        } else if (d < best) {
          best = d;
          q = j;
        }
      }
      if (q < 0) return LpStatus::kOptimal;

      Eigen::Index p = -1;
      double min_ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        const double a = t_(i, q);
        if (a <= opt_.pivot_tol) continue;
        const double ratio = std::max(t_(i, rhs_col_), 0.0) / a;
        if (p < 0) {
          min_ratio = ratio;
          p = i;
          continue;
        }
        const double tie = 1e-12 * std::max(1.0, min_ratio);
        if (ratio < min_ratio - tie) {
          min_ratio = ratio;
          p = i;
        } else if (ratio <= min_ratio + tie && basis_[i] < basis_[p]) {
          p = i;
        }
      }
      if (p < 0) return LpStatus::kUnbounded;

      if (min_ratio <= opt_.feasibility_tol) {
        if (++degenerate_run >= opt_.bland_after_degenerate) {
          bland_ = true;
          sol.used_bland = true;
        }
      } else {
        degenerate_run = 0;
      }
      pivot(p, q);
      ++sol.iterations;
      clamp_rhs();
    }
  }

  void clamp_rhs() {
    const Eigen::Index m = t_.rows() - 1;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (t_(i, rhs_col_) < 0.0 && t_(i, rhs_col_) > -opt_.feasibility_tol) {
        t_(i, rhs_col_) = 0.0;
      }
    }
  }

  // After phase 1, basic artificials sit at zero. Pivot them out where a
  // non-artificial column has a usable entry; otherwise the row is redundant.
  void drive_out_artificials() {
    const Eigen::Index m = t_.rows() - 1;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (kind_[basis_[i]] != ColumnKind::kArtificial) continue;
      Eigen::Index best = -1;
      double best_abs = opt_.pivot_tol * 100.0;
      for (Eigen::Index j = 0; j < rhs_col_; ++j) {
        if (!may_enter(j)) continue;
        if (std::abs(t_(i, j)) > best_abs) {
          best_abs = std::abs(t_(i, j));
          best = j;
        }
      }
      if (best >= 0) pivot(i, best);
    }
  }

  void extract(const LinearProgram& lp, LpSolution& sol) const {
    const Eigen::Index m = t_.rows() - 1;
    Eigen::VectorXd xs = Eigen::VectorXd::Zero(rhs_col_);
    for (Eigen::Index i = 0; i < m; ++i) xs(basis_[i]) = t_(i, rhs_col_);
    const auto n = static_cast<Eigen::Index>(lp.num_vars());
    sol.x.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      sol.x(j) = xs(plus_col_[j]);
      if (minus_col_[j] >= 0) sol.x(j) -= xs(minus_col_[j]);
    }
    sol.objective = lp.objective().dot(sol.x);
    sol.duals.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      sol.duals(i) = -flip_[i] * t_(m, identity_col_[i]);
    }
  }

  SimplexOptions opt_;
  Eigen::MatrixXd t_;
  Eigen::VectorXd cost_;
  std::vector<Eigen::Index> plus_col_;
  std::vector<Eigen::Index> minus_col_;
  std::vector<Eigen::Index> identity_col_;
  std::vector<Eigen::Index> basis_;
  std::vector<ColumnKind> kind_;
  std::vector<double> flip_;
  Eigen::Index num_structural_ = 0;
  Eigen::Index rhs_col_ = 0;
  bool bland_ = false;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  Tableau tableau(lp, options);
  return tableau.run(lp);
}

}  // namespace superhedge

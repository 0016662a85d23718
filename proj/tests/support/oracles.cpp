#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace superhedge::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Reduces [a | rhs] in place to reduced row echelon form. Returns the pivot
// column of each pivot row.
std::vector<int> rref(Eigen::MatrixXd& a, Eigen::VectorXd& rhs, double tol) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  std::vector<int> pivots;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index best = r;
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      if (std::abs(a(i, c)) > std::abs(a(best, c))) best = i;
    }
    if (std::abs(a(best, c)) <= tol * scale) {
      a.col(c).tail(rows - r).setZero();
      continue;
    }
    a.row(r).swap(a.row(best));
    std::swap(rhs(r), rhs(best));
    const double piv = a(r, c);
    a.row(r) /= piv;
    rhs(r) /= piv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0.0) continue;
      const double f = a(i, c);
      a.row(i) -= f * a.row(r);
      rhs(i) -= f * rhs(r);
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

void combinations(int n, int k, int start, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& visit) {
  if (static_cast<int>(cur.size()) == k) {
    visit(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, visit);
    cur.pop_back();
  }
}

Eigen::VectorXd unit_max(Eigen::VectorXd v) {
  const double m = v.cwiseAbs().maxCoeff();
  return m > 0.0 ? Eigen::VectorXd(v / m) : v;
}

}  // namespace

EliminationResult eliminate(Eigen::MatrixXd a, Eigen::VectorXd rhs, double tol) {
  EliminationResult out;
  const double rhs_scale = std::max(1.0, rhs.size() ? rhs.cwiseAbs().maxCoeff() : 0.0);
  const std::vector<int> pivots = rref(a, rhs, tol);
  out.rank = static_cast<int>(pivots.size());
  out.consistent = true;
  for (Eigen::Index i = out.rank; i < rhs.size(); ++i) {
    if (std::abs(rhs(i)) > 1e-9 * rhs_scale) out.consistent = false;
  }
  if (out.consistent && out.rank == a.cols()) {
    out.solution = Eigen::VectorXd::Zero(a.cols());
    for (int r = 0; r < out.rank; ++r) out.solution(pivots[r]) = rhs(r);
  }
  return out;
}

std::vector<Eigen::VectorXd> null_space(const Eigen::MatrixXd& a, double tol) {
  Eigen::MatrixXd m = a;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(a.rows());
  const std::vector<int> pivots = rref(m, rhs, tol);
  std::vector<bool> is_pivot(static_cast<std::size_t>(a.cols()), false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<Eigen::VectorXd> basis;
  for (Eigen::Index f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(a.cols());
    v(f) = 1.0;
    for (std::size_t r = 0; r < pivots.size(); ++r) v(pivots[r]) = -m(static_cast<Eigen::Index>(r), f);
    basis.push_back(v);
  }
  return basis;
}

std::vector<Eigen::VectorXd> measure_vertices(const Eigen::MatrixXd& gains) {
  const int n = static_cast<int>(gains.rows());
  const int k = static_cast<int>(gains.cols());
  Eigen::MatrixXd a(k + 1, n);
  a.topRows(k) = gains.transpose();
  a.row(k).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs(k) = 1.0;

  std::vector<Eigen::VectorXd> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> support;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) support.push_back(i);
    }
    if (static_cast<int>(support.size()) > k + 1) continue;
    Eigen::MatrixXd sub(k + 1, static_cast<Eigen::Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = a.col(support[j]);
    const EliminationResult e = eliminate(sub, rhs);
    if (!e.consistent || e.rank != static_cast<int>(support.size())) continue;
    if (e.solution.minCoeff() <= 1e-12) continue;
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
    for (std::size_t j = 0; j < support.size(); ++j) q(support[j]) = e.solution(static_cast<Eigen::Index>(j));
    if ((a * q - rhs).cwiseAbs().maxCoeff() > 1e-9) continue;
    out.push_back(q);
  }
  return out;
}

double vertex_price(const std::vector<Eigen::VectorXd>& vertices, const Eigen::VectorXd& x) {
  double best = -kInf;
  for (const auto& q : vertices) best = std::max(best, q.dot(x));
  return best;
}

std::vector<Eigen::VectorXd> extreme_rays(const std::vector<Eigen::VectorXd>& normals, int dim) {
  std::vector<Eigen::VectorXd> out;
  const auto feasible = [&](const Eigen::VectorXd& r) {
    for (const auto& a : normals) {
      if (a.dot(r) > 1e-9 * std::max(1.0, a.cwiseAbs().maxCoeff())) return false;
    }
    return true;
  };
  const auto add = [&](const Eigen::VectorXd& r) {
    const Eigen::VectorXd u = unit_max(r);
    for (const auto& e : out) {
      if ((e - u).cwiseAbs().maxCoeff() <= 1e-9) return;
    }
    out.push_back(u);
  };
  std::vector<int> cur;
  combinations(static_cast<int>(normals.size()), dim - 1, 0, cur, [&](const std::vector<int>& idx) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(idx.size()), dim);
    for (std::size_t i = 0; i < idx.size(); ++i) a.row(static_cast<Eigen::Index>(i)) = normals[idx[i]].transpose();
    const std::vector<Eigen::VectorXd> ns =
        idx.empty() ? std::vector<Eigen::VectorXd>{Eigen::VectorXd::Unit(dim, 0)} : null_space(a);
    if (ns.size() != 1) return;
    if (feasible(ns[0])) add(ns[0]);
    if (feasible(-ns[0])) add(-ns[0]);
  });
  return out;
}

bool same_rays(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b,
               double tol) {
  const auto covered = [tol](const std::vector<Eigen::VectorXd>& from,
                             const std::vector<Eigen::VectorXd>& in) {
    for (const auto& x : from) {
      const Eigen::VectorXd u = unit_max(x);
      bool hit = false;
      for (const auto& y : in) hit = hit || (unit_max(y) - u).cwiseAbs().maxCoeff() <= tol;
      if (!hit) return false;
    }
    return true;
  };
  return covered(a, b) && covered(b, a);
}

LegendreValue legendre(const UtilityFunction& u, double y) {
  std::vector<double> xs;
  constexpr double kStep = 0.05;
  for (double t = 308.0; t >= -12.0; t -= kStep) {
    if (u.whole_line()) xs.push_back(-std::pow(10.0, t));
  }
  if (u.whole_line()) xs.push_back(0.0);
  for (double t = -12.0; t <= 308.0; t += kStep) {
    const double x = (u.whole_line() ? 0.0 : u.critical_wealth) + std::pow(10.0, t);
    if (x <= u.upper) xs.push_back(x);
  }

  const auto f = [&](double x) { return u.u(x) - x * y; };
  std::vector<double> fs(xs.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fs[i] = f(xs[i]);
    if (std::isfinite(fs[i]) && (!std::isfinite(fs[best]) || fs[i] > fs[best])) best = i;
  }

  LegendreValue out;
  const bool interior = best > 0 && best + 1 < xs.size();
  if (!interior || !std::isfinite(fs[best]) || !std::isfinite(fs[best - 1]) ||
      !std::isfinite(fs[best + 1])) {
    out.representable = false;
    out.value = fs[best];
    return out;
  }

  // Golden-section search on the concave function f over the bracketing cell.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = xs[best - 1];
  double hi = xs[best + 1];
  double c = hi - g * (hi - lo);
  double d = lo + g * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  double top = fs[best];
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
    top = std::max({top, fc, fd});
  }
  out.value = top;
  return out;
}

}  // namespace superhedge::oracle

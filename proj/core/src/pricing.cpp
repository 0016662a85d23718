#include "superhedge/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "superhedge/error.hpp"
#include "superhedge/lp.hpp"

namespace superhedge {

std::string_view cone_choice_name(ConeChoice c) {
  switch (c) {
    case ConeChoice::kCU: return "C_U";
    case ConeChoice::kKU: return "K_U";
    case ConeChoice::kAdmissible: return "K_adm";
  }
  return "C_U";
}

namespace {

void check_claim(const MarketModel& m, const Claim& x) {
  if (x.payoff.size() != m.num_states()) {
    throw Error(ErrorCode::kDimensionError,
                "claim has " + std::to_string(x.payoff.size()) + " entries, market has " +
                    std::to_string(m.num_states()) + " terminal states");
  }
  if (!x.payoff.allFinite()) throw Error(ErrorCode::kValidationError, "claim values must be finite");
}

// Accumulated gains at a node as a row over the generators of gains_space.
Eigen::VectorXd accumulated_gains_row(const MarketModel& m, const GainsSpace& k, int node) {
  const auto& nodes = m.nodes();
  Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k.generators.size()));
  for (std::size_t j = 0; j < k.generators.size(); ++j) {
    const auto& g = k.generators[j];
    // Walk up from the node: generator (u, a) contributes if u is a strict ancestor.
    int child = node;
    int u = nodes[node].parent;
    while (u >= 0 && u != g.node) {
      child = u;
      u = nodes[u].parent;
    }
    if (u == g.node) {
      row(static_cast<Eigen::Index>(j)) = nodes[child].prices[g.asset] - nodes[u].prices[g.asset];
    }
  }
  return row;
}

}  // namespace

PrimalResult suprep_primal(const MarketModel& m, const Claim& x, ConeChoice cone, double bound) {
  check_claim(m, x);
  if (cone == ConeChoice::kAdmissible && !(bound > 0.0)) {
    throw Error(ErrorCode::kValidationError, "admissibility bound must be positive");
  }
  const GainsSpace k = gains_space(m);
  const Eigen::MatrixXd g = k.matrix();
  const int n = m.num_states();
  const auto ng = static_cast<int>(k.generators.size());

  // Variables: x, theta_1..theta_ng, all free.
  LinearProgram lp(static_cast<std::size_t>(1 + ng));
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(1 + ng);
  obj(0) = 1.0;
  lp.set_objective(obj);
  for (int j = 0; j <= ng; ++j) lp.set_bound(static_cast<std::size_t>(j), VarBound::kFree);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd row(1 + ng);
    row(0) = 1.0;
    row.tail(ng) = g.row(i).transpose();
    lp.add_row(row, RowSense::kGreaterEqual, x.payoff(i));
  }
  if (cone == ConeChoice::kAdmissible && std::isfinite(bound)) {
    for (int v = 0; v < static_cast<int>(m.nodes().size()); ++v) {
      if (m.nodes()[v].parent < 0) continue;
      Eigen::VectorXd row = Eigen::VectorXd::Zero(1 + ng);
      row.tail(ng) = accumulated_gains_row(m, k, v);
      lp.add_row(row, RowSense::kGreaterEqual, -bound);
    }
  }
  const LpSolution s = solve_lp(lp);
  if (s.status == LpStatus::kUnbounded) {
    throw Error(ErrorCode::kUnbounded,
                "super-replication LP is unbounded below: the market admits arbitrage");
  }
  if (s.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInfeasible, "super-replication LP did not reach optimality");
  }
  PrimalResult out;
  out.cone = cone;
  out.price = s.x(0);
  out.certificate.x = s.x(0);
  out.certificate.theta = s.x.tail(ng);
  out.certificate.slack = (Eigen::VectorXd::Constant(n, s.x(0)) + g * out.certificate.theta) - x.payoff;
  return out;
}

DualResult suprep_dual(const MarketModel& m, const Claim& x) {
  check_claim(m, x);
  const GainsSpace k = gains_space(m);
  const int n = m.num_states();
  const Eigen::VectorXd& p = m.reference_probabilities();

  const auto base = [&]() {
    LinearProgram lp(static_cast<std::size_t>(n));
    for (const auto& g : k.generators) lp.add_row(g.payoff, RowSense::kEqual, 0.0);
    lp.add_row(Eigen::VectorXd::Ones(n), RowSense::kEqual, 1.0);
    return lp;
  };

  LinearProgram lp = base();
  lp.set_objective(-x.payoff);
  const LpSolution s = solve_lp(lp);
  if (s.status == LpStatus::kInfeasible) {
    throw Error(ErrorCode::kEmptyMeasureSet, "the set of separating measures is empty");
  }
  if (s.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInfeasible, "dual pricing LP did not reach optimality");
  }
  const double best = -s.objective;
  const double scale = std::max(1.0, x.payoff.cwiseAbs().maxCoeff());

  // Lexicographic tie-break on the optimal face: minimize q_0, fix it,
  // minimize q_1, and so on. Densities order like probabilities since P > 0.
  Eigen::VectorXd q = s.x;
  LinearProgram face = base();
  face.add_row(x.payoff, RowSense::kGreaterEqual, best - 1e-10 * scale);
  for (int i = 0; i < n; ++i) {
    face.set_objective(Eigen::VectorXd::Unit(n, i));
    const LpSolution t = solve_lp(face);
    if (t.status != LpStatus::kOptimal) break;
    q = t.x;
    face.add_row(Eigen::VectorXd::Unit(n, i), RowSense::kLessEqual, t.x(i) + 1e-12);
  }
  q = q.cwiseMax(0.0);
  q /= q.sum();

  // Snap to the basic solution on the support: drops the face tolerance.
  std::vector<int> support;
  for (int i = 0; i < n; ++i) {
    if (q(i) > 1e-9) support.push_back(i);
  }
  const auto rows = static_cast<Eigen::Index>(k.generators.size()) + 1;
  Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) {
    for (std::size_t r = 0; r + 1 < static_cast<std::size_t>(rows); ++r) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
          k.generators[r].payoff(support[j]);
    }
    a(rows - 1, static_cast<Eigen::Index>(j)) = 1.0;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
  rhs(rows - 1) = 1.0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() == static_cast<Eigen::Index>(support.size())) {
    const Eigen::VectorXd sol = qr.solve(rhs);
    Eigen::VectorXd snapped = Eigen::VectorXd::Zero(n);
    for (std::size_t j = 0; j < support.size(); ++j) snapped(support[j]) = sol(static_cast<Eigen::Index>(j));
    if ((a * sol - rhs).cwiseAbs().maxCoeff() <= 1e-12 && snapped.minCoeff() >= 0.0 &&
        std::abs(snapped.dot(x.payoff) - best) <= 1e-9 * scale) {
      q = snapped;
    }
  }

  DualResult out;
  out.probabilities = q;
  out.density = q.cwiseQuotient(p);
  out.price = best;
  return out;
}

PriceReport price_report(const MarketModel& m, const Claim& x) {
  check_claim(m, x);
  separating_polytope(m);  // NoMeasure on arbitrage
  PriceReport r;
  const PrimalResult primal = suprep_primal(m, x, ConeChoice::kCU);
  r.dual_certificate = suprep_dual(m, x);
  r.primal = primal.price;
  r.primal_certificate = primal.certificate;
  r.dual = r.dual_certificate.price;
  r.gap = r.primal - r.dual;
  r.gap_ok = std::abs(r.gap) <= kGapTolerance;
  return r;
}

std::vector<TruncationRow> truncation_gap_study(const TruncationFamily& family,
                                                const std::vector<int>& levels,
                                                double bound) {
  if (!(bound > 0.0)) throw Error(ErrorCode::kValidationError, "admissibility bound must be positive");
  const Sequence weights = geometric_sequence(family.r);
  std::vector<TruncationRow> rows;
  for (int n : levels) {
    if (n < 2) throw Error(ErrorCode::kValidationError, "truncation levels must be at least 2");
    // Validates that the truncated weights normalize.
    truncated_market(weights, n, [](std::int64_t k) { return static_cast<double>(k); }, family.s0);

    Eigen::VectorXd claim(n), gain(n);
    for (int i = 0; i < n; ++i) {
      const double s1 = static_cast<double>(i + 1);
      gain(i) = s1 - family.s0;
      claim(i) = family.claim == TruncationFamily::ClaimKind::kUnboundedBelow
                     ? -s1
                     : std::max(s1 - family.strike, 0.0);
    }

    // Dual of  min x  s.t.  x + theta g_k >= X_k,  theta g_k >= -bound:
    //   min  -sum q_k X_k + bound sum mu_k
    //   s.t. sum q_k = 1,  sum (q_k + mu_k) g_k = 0,  q, mu >= 0.
    LinearProgram dual(static_cast<std::size_t>(2 * n));
    Eigen::VectorXd obj(2 * n);
    obj.head(n) = -claim;
    obj.tail(n).setConstant(bound);
    dual.set_objective(obj);
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(2 * n);
    mass.head(n).setOnes();
    dual.add_row(mass, RowSense::kEqual, 1.0);
    Eigen::VectorXd mart(2 * n);
    mart << gain, gain;
    dual.add_row(mart, RowSense::kEqual, 0.0);
    const LpSolution s = solve_lp(dual);
    if (s.status != LpStatus::kOptimal) {
      throw Error(ErrorCode::kInfeasible, "truncated admissible pricing LP failed");
    }

    // Without the bound (mu = 0) the same LP is the plain dual supremum.
    LinearProgram plain(static_cast<std::size_t>(n));
    plain.set_objective(-claim);
    plain.add_row(Eigen::VectorXd::Ones(n), RowSense::kEqual, 1.0);
    plain.add_row(gain, RowSense::kEqual, 0.0);
    const LpSolution d = solve_lp(plain);
    if (d.status != LpStatus::kOptimal) {
      throw Error(ErrorCode::kEmptyMeasureSet, "truncated market has no separating measure");
    }

    TruncationRow row;
    row.n = n;
    row.theta = -s.duals(1);
    row.primal = -s.objective;
    row.dual = -d.objective;
    row.gap = row.primal - row.dual;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace superhedge

#include "superhedge/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "superhedge/error.hpp"
#include "superhedge/lp.hpp"

namespace superhedge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNormalizationTol = 1e-9;

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

// Calls f(subset) for every k-subset of {0..n-1} in lexicographic order.
template <typename F>
void for_each_subset(int n, int k, F&& f) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::int64_t countable_terms(const MeasureDensity& q) { return q.model().truncation_default; }

double log_p(const CountableModel& cm, std::int64_t k) { return cm.p.log_value(k); }
double log_q(const CountableModel& cm, std::int64_t k) { return cm.q.log_value(k); }

// p_k V+(z_k) in log space; z_k = 0 uses the closure value at zero.
double weighted_v_plus(const ConjugatePair& pair, double lp, double lz) {
  if (lz == -kInf) {
    const double v0 = std::max(pair.v_at_zero, 0.0);
    return v0 == kInf ? kInf : std::exp(lp) * v0;
  }
  const double lv = pair.log_v_plus(lz);
  if (lv == -kInf) return 0.0;
  return std::exp(lp + lv);
}

EntropyValue from_series(const SeriesResult& s) {
  EntropyValue e;
  e.method = EntropyMethod::kSeriesPartial;
  e.verdict = s.verdict;
  e.n_terms = s.n_terms;
  e.partial_sum = s.partial_sum;
  e.finite = s.verdict == SeriesVerdict::kFinite;
  e.value = s.verdict == SeriesVerdict::kInfinite ? kInf : s.partial_sum;
  return e;
}

}  // namespace

MeasureDensity MeasureDensity::finite(Eigen::VectorXd density, Eigen::VectorXd reference) {
  if (density.size() != reference.size()) {
    throw Error(ErrorCode::kDimensionError,
                "density has " + std::to_string(density.size()) + " entries, reference has " +
                    std::to_string(reference.size()));
  }
  for (Eigen::Index i = 0; i < density.size(); ++i) {
    if (!std::isfinite(density(i)) || density(i) < 0.0) {
      throw Error(ErrorCode::kValidationError,
                  "density entry " + std::to_string(i) + " is negative or not finite");
    }
  }
  const double mass = reference.dot(density);
  if (std::abs(mass - 1.0) > kNormalizationTol) {
    throw Error(ErrorCode::kValidationError,
                "density fails normalization: E[dQ/dP] = " + std::to_string(mass));
  }
  MeasureDensity out;
  out.density_ = std::move(density);
  out.reference_ = std::move(reference);
  return out;
}

MeasureDensity MeasureDensity::from_probabilities(const Eigen::VectorXd& q,
                                                  const Eigen::VectorXd& reference) {
  if (q.size() != reference.size()) {
    throw Error(ErrorCode::kDimensionError, "probability vector and reference differ in size");
  }
  return finite(q.cwiseQuotient(reference), reference);
}

MeasureDensity MeasureDensity::countable(CountableModel model) {
  MeasureDensity out;
  out.model_ = std::move(model);
  return out;
}

double MeasurePolytope::max_violation(const Eigen::VectorXd& q) const {
  if (q.size() != dim) {
    throw Error(ErrorCode::kDimensionError, "measure dimension does not match the polytope");
  }
  double worst = std::abs(q.sum() - 1.0);
  if (dim > 0) worst = std::max(worst, std::max(0.0, -q.minCoeff()));
  if (equalities.rows() > 0) worst = std::max(worst, (equalities * q).cwiseAbs().maxCoeff());
  return worst;
}

Eigen::VectorXd MeasurePolytope::barycenter() const {
  if (vertices.empty()) return feasible_point;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
  for (const auto& v : vertices) c += v;
  return c / static_cast<double>(vertices.size());
}

MeasurePolytope separating_polytope(const MarketModel& m) {
  const GainsSpace k = gains_space(m);
  const int n = m.num_states();
  const int rows = static_cast<int>(k.generators.size());

  MeasurePolytope poly;
  poly.dim = n;
  poly.equalities.resize(rows, n);
  for (int r = 0; r < rows; ++r) poly.equalities.row(r) = k.generators[r].payoff.transpose();

  LinearProgram lp(static_cast<std::size_t>(n));
  lp.set_objective(Eigen::VectorXd::Zero(n));
  for (int r = 0; r < rows; ++r) lp.add_row(poly.equalities.row(r).transpose(), RowSense::kEqual, 0.0);
  lp.add_row(Eigen::VectorXd::Ones(n), RowSense::kEqual, 1.0);
  const LpSolution feas = solve_lp(lp);
  if (feas.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kNoMeasure,
                "no separating measure: the market admits arbitrage");
  }
  poly.feasible_point = feas.x;

  if (n > kMaxVertexEnumerationStates) return poly;

  // Basic feasible solutions of [G'; 1'] q = e_last, q >= 0.
  Eigen::MatrixXd a(rows + 1, n);
  a.topRows(rows) = poly.equalities;
  a.row(rows).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows + 1);
  rhs(rows) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  const int rank = static_cast<int>(lu.rank());

  std::vector<Eigen::VectorXd> found;
  for_each_subset(n, rank, [&](const std::vector<int>& cols) {
    Eigen::MatrixXd sub(rows + 1, rank);
    for (int j = 0; j < rank; ++j) sub.col(j) = a.col(cols[j]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    qr.setThreshold(1e-10);
    if (qr.rank() < rank) return;
    const Eigen::VectorXd x = qr.solve(rhs);
    if ((sub * x - rhs).cwiseAbs().maxCoeff() > 1e-9) return;
    if (x.minCoeff() < -1e-10) return;
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < rank; ++j) q(cols[j]) = std::max(x(j), 0.0);
    for (const auto& v : found) {
      if ((v - q).cwiseAbs().maxCoeff() <= 1e-8) return;
    }
    found.push_back(std::move(q));
  });
  std::sort(found.begin(), found.end(), lex_less);
  poly.vertices = std::move(found);
  poly.vertices_enumerated = true;
  return poly;
}

EntropyValue loss_entropy(const MeasureDensity& q, const ConjugatePair& pair, double b) {
  if (!(b > 0.0)) throw Error(ErrorCode::kDomainError, "loss entropy needs b > 0");
  if (!q.is_countable()) {
    EntropyValue e;
    e.n_terms = q.dim();
    double sum = 0.0;
    for (int i = 0; i < q.dim(); ++i) {
      const double z = q.density()(i);
      if (z >= b) sum += q.reference()(i) * v_plus(pair, z);
    }
    e.value = e.partial_sum = sum;
    e.finite = std::isfinite(sum);
    e.verdict = e.finite ? SeriesVerdict::kFinite : SeriesVerdict::kInfinite;
    return e;
  }
  const CountableModel& cm = q.model();
  const std::int64_t first = cm.p.first_index;
  const double lb = std::log(b);
  const auto term = [&](std::int64_t j) {
    const std::int64_t k = first + j - 1;
    const double lp = log_p(cm, k);
    const double lz = log_q(cm, k) - lp;
    if (!(lz >= lb)) return 0.0;
    return weighted_v_plus(pair, lp, lz);
  };
  return from_series(classify_series(term, countable_terms(q)));
}

EntropyValue full_entropy(const MeasureDensity& q, const ConjugatePair& pair) {
  if (!q.is_countable()) {
    EntropyValue e;
    e.n_terms = q.dim();
    double sum = 0.0;
    for (int i = 0; i < q.dim(); ++i) {
      const double z = q.density()(i);
      const double v = z == 0.0 ? pair.v_at_zero : pair.v(z);
      sum += q.reference()(i) * v;
    }
    e.value = e.partial_sum = sum;
    e.finite = std::isfinite(sum);
    e.verdict = e.finite ? SeriesVerdict::kFinite : SeriesVerdict::kInfinite;
    return e;
  }
  const CountableModel& cm = q.model();
  const std::int64_t first = cm.p.first_index;
  double negative = 0.0;
  const auto term = [&](std::int64_t j) {
    const std::int64_t k = first + j - 1;
    const double lp = log_p(cm, k);
    const double lz = log_q(cm, k) - lp;
    const double y = std::exp(lz);
    const double v = lz == -kInf ? pair.v_at_zero : (std::isfinite(y) ? pair.v(y) : kInf);
    if (v < 0.0) negative += std::exp(lp) * v;
    return weighted_v_plus(pair, lp, lz);
  };
  EntropyValue e = from_series(classify_series(term, countable_terms(q)));
  e.partial_sum += negative;
  if (e.verdict != SeriesVerdict::kInfinite) e.value = e.partial_sum;
  return e;
}

EntropyReport classify_measure(const MeasureDensity& q, const ConjugatePair& pair,
                               const MarketModel* m, double b) {
  EntropyReport r;
  r.b_used = b;
  if (m != nullptr) {
    if (q.is_countable() || q.dim() != m->num_states()) {
      throw Error(ErrorCode::kDimensionError,
                  "measure is not dimensioned to the market's terminal states");
    }
    const Eigen::VectorXd probs = q.probabilities();
    for (const auto& g : gains_space(*m).generators) {
      r.m1_violation = std::max(r.m1_violation, std::abs(probs.dot(g.payoff)));
    }
    r.in_m1 = r.m1_violation <= 1e-9;
  } else {
    r.in_m1 = true;  // K = {0}
  }
  r.loss = loss_entropy(q, pair, b);
  r.full = full_entropy(q, pair);
  r.in_hat_mv = r.in_m1 && r.loss.finite;
  r.in_mv = r.in_m1 && r.full.finite;
  return r;
}

std::pair<CountableModel, MeasureDensity> mhatv_minus_mv_witness(const ConjugatePair& pair) {
  if (pair.v_at_zero != kInf || !pair.source.whole_line()) {
    throw Error(ErrorCode::kPreconditionError,
                "the witness needs a whole-line utility that is unbounded above");
  }
  constexpr double ln2 = std::numbers::ln2;
  Sequence p;
  p.kind = "witness_p";
  p.first_index = 0;
  p.log_value = [](std::int64_t k) { return -static_cast<double>(k + 1) * ln2; };
  Sequence q;
  q.kind = "witness_q";
  q.first_index = 0;
  q.log_value = [](std::int64_t k) {
    if (k == 0) return std::log(5.0 / 6.0);
    return -static_cast<double>(2 * k + 1) * ln2;
  };
  CountableModel cm = make_countable_model(std::move(p), std::move(q), 4096);
  return {cm, MeasureDensity::countable(cm)};
}

}  // namespace superhedge

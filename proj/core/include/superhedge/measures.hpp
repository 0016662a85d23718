#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "superhedge/market.hpp"
#include "superhedge/series.hpp"
#include "superhedge/utility.hpp"

namespace superhedge {

/// A measure Q << P identified with its Radon-Nikodym derivative dQ/dP.
/// Finite: per-state density over reference weights. Countable: the model's
/// q sequence against its p sequence (z_k = q_k / p_k).
class MeasureDensity {
 public:
  /// Throws ValidationError unless density >= 0 and sum p_i z_i = 1 (1e-9).
  static MeasureDensity finite(Eigen::VectorXd density, Eigen::VectorXd reference);
  static MeasureDensity from_probabilities(const Eigen::VectorXd& q,
                                           const Eigen::VectorXd& reference);
  static MeasureDensity countable(CountableModel model);

  bool is_countable() const { return model_.has_value(); }
  int dim() const { return static_cast<int>(density_.size()); }
  const Eigen::VectorXd& density() const { return density_; }
  const Eigen::VectorXd& reference() const { return reference_; }
  Eigen::VectorXd probabilities() const { return reference_.cwiseProduct(density_); }
  const CountableModel& model() const { return *model_; }

 private:
  Eigen::VectorXd density_;
  Eigen::VectorXd reference_;
  std::optional<CountableModel> model_;
};

/// The separating measures M_1 of a tree market, in probability
/// coordinates q: sum q = 1, q >= 0 and E_Q[g] = 0 for every gains
/// generator g (K is a linear space, so <= 0 becomes = 0).
struct MeasurePolytope {
  int dim = 0;
  Eigen::MatrixXd equalities;  // one row per gains generator, in q coordinates
  std::vector<Eigen::VectorXd> vertices;  // lexicographic order
  bool vertices_enumerated = false;
  Eigen::VectorXd feasible_point;  // from the emptiness LP

  double max_violation(const Eigen::VectorXd& q) const;
  bool contains(const Eigen::VectorXd& q, double tol = 1e-9) const {
    return max_violation(q) <= tol;
  }
  // Mean of the vertices, or the feasible point when they were not enumerated.
  Eigen::VectorXd barycenter() const;
};

inline constexpr int kMaxVertexEnumerationStates = 12;

/// H-representation always; vertices by basic-solution enumeration when the
/// market has at most 12 terminal states. Throws NoMeasure when empty.
MeasurePolytope separating_polytope(const MarketModel& m);

enum class EntropyMethod { kExactSum, kSeriesPartial };

struct EntropyValue {
  double value = 0.0;  // +inf when divergent; partial sum otherwise
  double partial_sum = 0.0;
  bool finite = true;
  EntropyMethod method = EntropyMethod::kExactSum;
  SeriesVerdict verdict = SeriesVerdict::kFinite;
  std::int64_t n_terms = 0;
};

/// E[V+(dQ/dP) 1{dQ/dP >= b}].
EntropyValue loss_entropy(const MeasureDensity& q, const ConjugatePair& pair, double b);

/// E[V(dQ/dP)] with V(0) = sup U. Countable finiteness is decided on the
/// series of p_k V+(z_k); the negative part is always summable since V is
/// bounded below by an affine function.
EntropyValue full_entropy(const MeasureDensity& q, const ConjugatePair& pair);

struct EntropyReport {
  EntropyValue loss;
  EntropyValue full;
  double b_used = 1.0;
  bool in_m1 = false;
  bool in_hat_mv = false;
  bool in_mv = false;
  double m1_violation = 0.0;
};

/// Classifies q into M_1 / finite loss entropy / finite entropy. Without a
/// market, K = {0} and every probability measure is separating. A series
/// whose verdict is unknown does not count as finite.
EntropyReport classify_measure(const MeasureDensity& q, const ConjugatePair& pair,
                               const MarketModel* m, double b);

/// A countable measure with finite loss entropy but infinite entropy:
/// p_0 = 1/2, p_k = 2^{-(k+1)}, z_0 = 5/3, z_k = 2^{-k} (k >= 1). Needs a
/// whole-line utility unbounded above (V(0+) = +inf).
std::pair<CountableModel, MeasureDensity> mhatv_minus_mv_witness(const ConjugatePair& pair);

}  // namespace superhedge

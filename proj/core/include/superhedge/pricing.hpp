#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "superhedge/market.hpp"
#include "superhedge/measures.hpp"

namespace superhedge {

enum class ConeChoice { kCU, kKU, kAdmissible };

std::string_view cone_choice_name(ConeChoice c);

inline constexpr double kDefaultAdmissibilityBound = 1e3;
inline constexpr double kGapTolerance = 1e-7;

/// x 1 + G theta = X + slack with slack >= 0.
struct PrimalCertificate {
  double x = 0.0;
  Eigen::VectorXd theta;  // one coefficient per gains generator
  Eigen::VectorXd slack;
};

struct PrimalResult {
  double price = 0.0;
  ConeChoice cone = ConeChoice::kCU;
  PrimalCertificate certificate;
};

/// Minimal initial capital: min x s.t. x + sum_g theta_g g >= X, theta free.
/// C_U and K_U give the same LP. The admissible choice also requires the
/// accumulated gains at every node to stay >= -bound. Throws Unbounded when
/// the LP is unbounded below (the market admits arbitrage).
PrimalResult suprep_primal(const MarketModel& m, const Claim& x,
                           ConeChoice cone = ConeChoice::kCU,
                           double bound = kDefaultAdmissibilityBound);

struct DualResult {
  double price = 0.0;
  Eigen::VectorXd probabilities;  // optimizing vertex
  Eigen::VectorXd density;        // probabilities / P
};

/// max E_Q[X] over the separating polytope. Among optimizers the
/// lexicographically smallest density is returned. Throws EmptyMeasureSet
/// when the polytope is empty.
DualResult suprep_dual(const MarketModel& m, const Claim& x);

struct PriceReport {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  bool gap_ok = false;  // |gap| <= 1e-7
  PrimalCertificate primal_certificate;
  DualResult dual_certificate;
};

/// Both sides of the pricing duality. Throws NoMeasure for an arbitrage
/// market before attempting either side.
PriceReport price_report(const MarketModel& m, const Claim& x);

/// One-period countable market truncated to N states: weights
/// (1 - r) r^{k-1}, S_0 = s0, S_1(k) = k. A label for the example family, not
/// part of the general theory.
struct TruncationFamily {
  double r = 0.9;
  double s0 = 2.0;
  enum class ClaimKind { kUnboundedBelow, kCall } claim = ClaimKind::kUnboundedBelow;
  double strike = 2.0;  // call strike
};

struct TruncationRow {
  int n = 0;
  double primal = 0.0;  // admissible super-replication price
  double dual = 0.0;    // sup over the truncated separating measures
  double gap = 0.0;
  double theta = 0.0;
};

/// For each level N: primal price under accumulated gains >= -bound versus
/// the dual supremum. The primal is solved through its LP dual (two rows),
/// and the hedge is read off the multipliers.
std::vector<TruncationRow> truncation_gap_study(const TruncationFamily& family,
                                                const std::vector<int>& levels,
                                                double bound);

}  // namespace superhedge

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace superhedge {

/// One node of the event tree as read from input.
struct NodeSpec {
  std::string id;
  std::optional<std::string> parent;  // nullopt for the root
  double probability = 1.0;           // conditional on the parent; ignored at the root
  std::vector<double> prices;         // discounted prices, one per asset
};

struct TreeNode {
  std::string id;
  int parent = -1;
  double probability = 1.0;
  std::vector<double> prices;
  int time = 0;
  std::vector<int> children;
};

/// Finite event-tree market with full-support reference measure P.
/// Terminal states are the leaves in depth-first order.
class MarketModel {
 public:
  int num_assets() const { return assets_; }
  int num_states() const { return static_cast<int>(leaves_.size()); }
  int horizon() const { return horizon_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const std::vector<int>& terminal_states() const { return leaves_; }
  const Eigen::VectorXd& reference_probabilities() const { return p_; }

  /// Indices (into terminal_states) of the leaves descending from a node.
  const std::vector<int>& leaves_below(int node) const { return leaves_below_[node]; }
  /// Node index at the given time on the path to a leaf.
  int ancestor_at(int state, int time) const;

  friend MarketModel build_market(int assets, const std::vector<NodeSpec>& nodes);

 private:
  int assets_ = 0;
  int horizon_ = 0;
  std::vector<TreeNode> nodes_;
  std::vector<int> leaves_;
  std::vector<std::vector<int>> leaves_below_;
  std::vector<std::vector<int>> paths_;  // per state: node indices from root to leaf
  Eigen::VectorXd p_;
};

/// Validates and builds a market. Throws ValidationError naming the first
/// violated invariant (unknown parent, zero probability, ragged leaves, ...).
MarketModel build_market(int assets, const std::vector<NodeSpec>& nodes);

struct Claim {
  Eigen::VectorXd payoff;  // one entry per terminal state
};

struct ClaimSpec {
  enum class Type { kCall, kPut, kVector };
  Type type = Type::kVector;
  double strike = 0.0;
  int asset = 0;
  std::vector<double> values;
};

Claim make_claim(const MarketModel& m, const ClaimSpec& spec);

/// One-step gain of one asset at one non-terminal node, as a payoff vector
/// over terminal states (zero off the subtree).
struct GainsGenerator {
  int node = 0;
  int asset = 0;
  Eigen::VectorXd payoff;
};

/// The linear space K of zero-cost terminal wealths, spanned by generators.
struct GainsSpace {
  int dim = 0;
  std::vector<GainsGenerator> generators;
  bool linear = true;

  /// dim x generators matrix.
  Eigen::MatrixXd matrix() const;
};

GainsSpace gains_space(const MarketModel& m);

/// A positive sequence k -> x_k given through ln x_k (so tails never
/// underflow), indexed from first_index.
struct Sequence {
  std::string kind;
  double param = 0.0;
  std::int64_t first_index = 1;
  std::function<double(std::int64_t)> log_value;

  double operator()(std::int64_t k) const;
};

/// p_k = (1 - r) r^{k-1}, k >= 1.
Sequence geometric_sequence(double r);
/// q_k = k^{-s} / zeta(s), k >= 1.
Sequence powerlaw_sequence(double s);

/// Countable one-period state space: reference weights p and a second
/// sequence q (the measure to classify), both summing to one.
struct CountableModel {
  Sequence p;
  Sequence q;
  std::int64_t truncation_default = 1000000;
};

/// Checks that partial sums of p and q stay within 1 + 1e-9 up to the
/// truncation and that the terms are nonnegative.
CountableModel make_countable_model(Sequence p, Sequence q,
                                    std::int64_t truncation_default = 1000000);

/// One-period, one-asset market on the first n states of a countable
/// weight sequence (renormalized): S_0 = s0, S_1(k) = asset(k).
MarketModel truncated_market(const Sequence& weights, int n,
                             const std::function<double(std::int64_t)>& asset, double s0);

}  // namespace superhedge

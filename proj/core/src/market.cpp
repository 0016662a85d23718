#include "superhedge/market.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "superhedge/error.hpp"

namespace superhedge {

int MarketModel::ancestor_at(int state, int time) const {
  return paths_.at(static_cast<std::size_t>(state)).at(static_cast<std::size_t>(time));
}

MarketModel build_market(int assets, const std::vector<NodeSpec>& specs) {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kValidationError, what);
  };
  if (assets < 0) fail("assets must be nonnegative");
  if (specs.empty()) fail("tree has no nodes");

  MarketModel m;
  m.assets_ = assets;
  std::map<std::string, int> index;
  for (const auto& s : specs) {
    if (!index.emplace(s.id, static_cast<int>(m.nodes_.size())).second) {
      fail("duplicate node id '" + s.id + "'");
    }
    TreeNode n;
    n.id = s.id;
    n.probability = s.parent ? s.probability : 1.0;
    n.prices = s.prices;
    if (static_cast<int>(n.prices.size()) != assets) {
      fail("node '" + s.id + "' has " + std::to_string(n.prices.size()) +
           " prices, expected " + std::to_string(assets));
    }
    for (double v : n.prices) {
      if (!std::isfinite(v)) fail("node '" + s.id + "' has a non-finite price");
    }
    m.nodes_.push_back(std::move(n));
  }

  int root = -1;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    if (!s.parent) {
      if (root >= 0) fail("multiple roots ('" + m.nodes_[root].id + "', '" + s.id + "')");
      root = static_cast<int>(i);
      continue;
    }
    auto it = index.find(*s.parent);
    if (it == index.end()) fail("unknown parent '" + *s.parent + "' of node '" + s.id + "'");
    if (!(s.probability > 0.0) || !std::isfinite(s.probability)) {
      fail("node '" + s.id + "' has non-positive conditional probability (P must have full support)");
    }
    m.nodes_[i].parent = it->second;
    m.nodes_[it->second].children.push_back(static_cast<int>(i));
  }
  if (root < 0) fail("tree has no root");

  // Depth-first traversal from the root; anything unvisited sits on a cycle.
  std::vector<bool> seen(m.nodes_.size(), false);
  std::vector<int> path;
  m.leaves_below_.assign(m.nodes_.size(), {});
  std::vector<double> weights;
  int leaf_time = -1;
  const std::function<void(int, int, double)> visit = [&](int v, int t, double w) {
    seen[v] = true;
    m.nodes_[v].time = t;
    path.push_back(v);
    if (m.nodes_[v].children.empty()) {
      if (leaf_time >= 0 && leaf_time != t) {
        fail("leaf '" + m.nodes_[v].id + "' at time " + std::to_string(t) +
             " but other leaves are at time " + std::to_string(leaf_time));
      }
      leaf_time = t;
      const int state = static_cast<int>(m.leaves_.size());
      m.leaves_.push_back(v);
      m.paths_.push_back(path);
      weights.push_back(w);
      for (int a : path) m.leaves_below_[a].push_back(state);
    } else {
      double sum = 0.0;
      for (int c : m.nodes_[v].children) sum += m.nodes_[c].probability;
      if (std::abs(sum - 1.0) > 1e-12) {
        fail("children of '" + m.nodes_[v].id + "' have probabilities summing to " +
             std::to_string(sum));
      }
      for (int c : m.nodes_[v].children) visit(c, t + 1, w * m.nodes_[c].probability);
    }
    path.pop_back();
  };
  visit(root, 0, 1.0);
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) fail("node '" + m.nodes_[i].id + "' is not reachable from the root");
  }

  m.horizon_ = leaf_time;
  m.p_ = Eigen::Map<Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  if (std::abs(m.p_.sum() - 1.0) > 1e-12) {
    fail("reference probabilities sum to " + std::to_string(m.p_.sum()));
  }
  return m;
}

Claim make_claim(const MarketModel& m, const ClaimSpec& spec) {
  const int n = m.num_states();
  Claim c;
  c.payoff = Eigen::VectorXd::Zero(n);
  if (spec.type == ClaimSpec::Type::kVector) {
    if (static_cast<int>(spec.values.size()) != n) {
      throw Error(ErrorCode::kDimensionError,
                  "claim has " + std::to_string(spec.values.size()) + " values, market has " +
                      std::to_string(n) + " terminal states");
    }
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(spec.values[i])) {
        throw Error(ErrorCode::kValidationError, "claim values must be finite");
      }
      c.payoff(i) = spec.values[i];
    }
    return c;
  }
  if (spec.asset < 0 || spec.asset >= m.num_assets()) {
    throw Error(ErrorCode::kDimensionError, "claim refers to asset " + std::to_string(spec.asset) +
                                                " of a " + std::to_string(m.num_assets()) +
                                                "-asset market");
  }
  for (int i = 0; i < n; ++i) {
    const double s = m.nodes()[m.terminal_states()[i]].prices[spec.asset];
    c.payoff(i) = spec.type == ClaimSpec::Type::kCall ? std::max(s - spec.strike, 0.0)
                                                       : std::max(spec.strike - s, 0.0);
  }
  return c;
}

Eigen::MatrixXd GainsSpace::matrix() const {
  Eigen::MatrixXd g(dim, static_cast<Eigen::Index>(generators.size()));
  for (std::size_t j = 0; j < generators.size(); ++j) {
    g.col(static_cast<Eigen::Index>(j)) = generators[j].payoff;
  }
  return g;
}

GainsSpace gains_space(const MarketModel& m) {
  GainsSpace k;
  k.dim = m.num_states();
  const auto& nodes = m.nodes();
  for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
    if (nodes[v].children.empty()) continue;
    for (int a = 0; a < m.num_assets(); ++a) {
      GainsGenerator g;
      g.node = v;
      g.asset = a;
      g.payoff = Eigen::VectorXd::Zero(k.dim);
      for (int state : m.leaves_below(v)) {
        const int child = m.ancestor_at(state, nodes[v].time + 1);
        g.payoff(state) = nodes[child].prices[a] - nodes[v].prices[a];
      }
      k.generators.push_back(std::move(g));
    }
  }
  return k;
}

double Sequence::operator()(std::int64_t k) const {
  if (k < first_index) return 0.0;
  return std::exp(log_value(k));
}

Sequence geometric_sequence(double r) {
  if (!(r > 0.0 && r < 1.0)) {
    throw Error(ErrorCode::kValidationError, "geometric sequence needs 0 < r < 1");
  }
  Sequence s;
  s.kind = "geometric";
  s.param = r;
  const double lr = std::log(r), l1 = std::log1p(-r);
  s.log_value = [lr, l1](std::int64_t k) { return l1 + static_cast<double>(k - 1) * lr; };
  return s;
}

Sequence powerlaw_sequence(double exponent) {
  if (!(exponent > 1.0)) {
    throw Error(ErrorCode::kValidationError, "power-law sequence needs s > 1");
  }
  Sequence s;
  s.kind = "powerlaw";
  s.param = exponent;
  const double lz = std::log(std::riemann_zeta(exponent));
  s.log_value = [exponent, lz](std::int64_t k) {
    return -exponent * std::log(static_cast<double>(k)) - lz;
  };
  return s;
}

CountableModel make_countable_model(Sequence p, Sequence q, std::int64_t truncation_default) {
  if (truncation_default < 1) {
    throw Error(ErrorCode::kValidationError, "truncation must be positive");
  }
  for (const Sequence* s : {&p, &q}) {
    double sum = 0.0;
    const std::int64_t last = s->first_index + truncation_default - 1;
    for (std::int64_t k = s->first_index; k <= last; ++k) {
      const double term = (*s)(k);
      if (!(term >= 0.0)) {
        throw Error(ErrorCode::kValidationError, s->kind + " sequence has a negative term");
      }
      sum += term;
    }
    if (sum > 1.0 + 1e-9) {
      throw Error(ErrorCode::kValidationError,
                  s->kind + " sequence partial sum exceeds one: " + std::to_string(sum));
    }
  }
  return CountableModel{std::move(p), std::move(q), truncation_default};
}

MarketModel truncated_market(const Sequence& weights, int n,
                             const std::function<double(std::int64_t)>& asset, double s0) {
  if (n < 1) throw Error(ErrorCode::kValidationError, "truncation level must be positive");
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[i] = weights(weights.first_index + i);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorCode::kValidationError, "truncated weights cannot be normalized");
  }
  std::vector<NodeSpec> nodes;
  nodes.push_back({"root", std::nullopt, 1.0, {s0}});
  for (int i = 0; i < n; ++i) {
    const double pi = w[i] / total;
    if (!(pi > 0.0)) {
      throw Error(ErrorCode::kValidationError,
                  "truncated weight of state " + std::to_string(i + 1) + " underflows to zero");
    }
    nodes.push_back({"s" + std::to_string(weights.first_index + i), std::string("root"), pi,
                     {asset(weights.first_index + i)}});
  }
  return build_market(1, nodes);
}

}  // namespace superhedge

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "superhedge/measures.hpp"

namespace superhedge {
namespace {

const double kBs[] = {0.5, 1.0, 2.0, 10.0};

class EntropyProperties : public ::testing::TestWithParam<std::uint64_t> {};

Eigen::VectorXd random_reference(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Eigen::VectorXd p(n);
  for (int i = 0; i < n; ++i) p(i) = u(rng);
  return p / p.sum();
}

TEST_P(EntropyProperties, FiniteVerdictDoesNotDependOnThreshold) {
  std::mt19937_64 rng(GetParam());
  const Eigen::VectorXd p = random_reference(rng, 2 + static_cast<int>(GetParam() % 7));
  const MeasureDensity q = MeasureDensity::finite(testgen::random_density(p, rng), p);
  for (const UtilityFunction& u : {exponential_utility(), glued_unbounded_utility(), log_utility()}) {
    const ConjugatePair pair = conjugate(u);
    const bool first = loss_entropy(q, pair, kBs[0]).finite;
    for (double b : kBs) EXPECT_EQ(loss_entropy(q, pair, b).finite, first);
  }
}

TEST_P(EntropyProperties, LossEntropyShrinksAsThresholdGrows) {
  std::mt19937_64 rng(GetParam() + 500);
  const Eigen::VectorXd p = random_reference(rng, 6);
  const MeasureDensity q = MeasureDensity::finite(testgen::random_density(p, rng), p);
  const ConjugatePair pair = conjugate(exponential_utility());
  double prev = std::numeric_limits<double>::infinity();
  for (double b : kBs) {
    const double v = loss_entropy(q, pair, b).value;
    EXPECT_LE(v, prev + 1e-15);
    prev = v;
  }
}

TEST_P(EntropyProperties, MixturesObeyTheConvexityBound) {
  std::mt19937_64 rng(GetParam() + 900);
  const Eigen::VectorXd p = random_reference(rng, 5);
  const Eigen::VectorXd z1 = testgen::random_density(p, rng);
  const Eigen::VectorXd z2 = testgen::random_density(p, rng);
  for (const UtilityFunction& u : {exponential_utility(), glued_unbounded_utility()}) {
    const ConjugatePair pair = conjugate(u);
    for (double b : kBs) {
      const double l1 = loss_entropy(MeasureDensity::finite(z1, p), pair, b).value;
      const double l2 = loss_entropy(MeasureDensity::finite(z2, p), pair, b).value;
      for (double a : {0.25, 0.5, 0.75}) {
        const EntropyValue mix = loss_entropy(MeasureDensity::finite(a * z1 + (1 - a) * z2, p), pair, b);
        EXPECT_TRUE(mix.finite);
        EXPECT_LE(mix.value, l1 + l2 + v_plus(pair, b) + 1e-12);
      }
    }
  }
}

TEST_P(EntropyProperties, CountableGeometricPairsAreFiniteForEveryThreshold) {
  std::mt19937_64 rng(GetParam());
  std::uniform_real_distribution<double> r(0.3, 0.8);
  const double rp = r(rng);
  // q decays more slowly than p but z_k = q_k / p_k grows only geometrically.
  const double rq = std::min(0.95, std::sqrt(rp));
  const MeasureDensity q =
      MeasureDensity::countable(make_countable_model(geometric_sequence(rp), geometric_sequence(rq)));
  const ConjugatePair pair = conjugate(exponential_utility());
  for (double b : kBs) EXPECT_TRUE(loss_entropy(q, pair, b).finite) << "rp=" << rp << " b=" << b;
}

INSTANTIATE_TEST_SUITE_P(Seeds, EntropyProperties, ::testing::Range<std::uint64_t>(1, 31));

TEST(EntropyCatalog, PolytopeVerticesOfFiniteTreesHaveFiniteLossEntropy) {
  const ConjugatePair pair = conjugate(exponential_utility());
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const MarketModel m = testgen::random_market(seed);
    for (const auto& v : separating_polytope(m).vertices) {
      const EntropyReport r =
          classify_measure(MeasureDensity::from_probabilities(v, m.reference_probabilities()), pair, &m, 1.0);
      EXPECT_TRUE(r.in_m1) << "seed " << seed;
      EXPECT_TRUE(r.in_hat_mv) << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace superhedge

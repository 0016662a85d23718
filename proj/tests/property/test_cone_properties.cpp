#include <random>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "superhedge/cones.hpp"

namespace superhedge {
namespace {

class RandomCones : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RandomCones, BipolarEqualsConicHull) {
  const testgen::RandomCone rc = testgen::random_cone(GetParam());
  const BipolarReport r = bipolar_check(rc.cone, rc.weights);
  EXPECT_TRUE(r.holds) << "bipolar " << r.bipolar.max_violation << " hull " << r.hull_polar.max_violation;
}

TEST_P(RandomCones, PolarReversesInclusion) {
  testgen::RandomCone rc = testgen::random_cone(GetParam(), 5, 6);
  const PolyCone small = rc.cone;
  PolyCone big = small;
  std::mt19937_64 rng(GetParam());
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < 2; ++k) {
    Eigen::VectorXd g(big.dim);
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = normal(rng);
    big.add_generator(g);
  }
  const PolyCone ps = polar(small, rc.weights);
  const PolyCone pb = polar(big, rc.weights);
  EXPECT_TRUE(cone_subset(pb, ps).equal);
}

TEST_P(RandomCones, TriplePolarEqualsPolar) {
  const testgen::RandomCone rc = testgen::random_cone(GetParam(), 5, 8);
  const PolyCone p = polar(rc.cone, rc.weights);
  const PolyCone ppp = polar(polar(p, rc.weights), rc.weights);
  EXPECT_TRUE(compare_cones(p, ppp).equal);
}

TEST_P(RandomCones, GeneratorsSatisfyTheirHalfspaces) {
  const testgen::RandomCone rc = testgen::random_cone(GetParam());
  const PolyCone h = with_halfspaces(rc.cone);
  for (std::size_t j = 0; j < rc.cone.generators.size(); ++j) {
    const Eigen::VectorXd g = rc.cone.generators[j] / rc.cone.generators[j].cwiseAbs().maxCoeff();
    EXPECT_LE(halfspace_violation(h, g), 1e-9);
    if (rc.cone.linear[j]) EXPECT_LE(halfspace_violation(h, -g), 1e-9);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomCones, ::testing::Range<std::uint64_t>(1001, 1101));

class MarketCones : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(MarketCones, DualityChainHolds) {
  const MarketModel m = testgen::random_market(GetParam());
  const DualityReport r = verify_duality_chain(m);
  for (const auto& c : r.chain_equalities) EXPECT_TRUE(c.holds) << c.name << " " << c.max_violation;
}

TEST_P(MarketCones, RepresentationAgreesWithMembership) {
  const MarketModel m = testgen::random_market(GetParam());
  std::mt19937_64 rng(GetParam());
  const RepresentationReport r =
      verify_representation(m, testgen::random_claims(m, rng, 10), default_sample_measures(m));
  EXPECT_TRUE(r.all_agree);
  EXPECT_TRUE(r.all_rejections_separated);
}

INSTANTIATE_TEST_SUITE_P(Seeds, MarketCones, ::testing::Range<std::uint64_t>(51, 71));

}  // namespace
}  // namespace superhedge

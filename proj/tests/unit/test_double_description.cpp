#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "superhedge/double_description.hpp"

namespace superhedge {
namespace {

std::vector<ConeConstraint> inequalities(const std::vector<Eigen::VectorXd>& normals) {
  std::vector<ConeConstraint> out;
  for (const auto& n : normals) out.push_back({n, false});
  return out;
}

TEST(DoubleDescription, NegativeOrthantNormalsGiveUnitRays) {
  std::vector<Eigen::VectorXd> normals;
  for (int i = 0; i < 3; ++i) normals.push_back(-Eigen::VectorXd::Unit(3, i));
  const ConeGenerators g = halfspaces_to_generators(3, inequalities(normals));
  EXPECT_TRUE(g.lineality.empty());
  std::vector<Eigen::VectorXd> expect;
  for (int i = 0; i < 3; ++i) expect.push_back(Eigen::VectorXd::Unit(3, i));
  EXPECT_TRUE(oracle::same_rays(g.rays, expect));
}

TEST(DoubleDescription, HalfPlaneHasLineality) {
  const ConeGenerators g = halfspaces_to_generators(2, {{Eigen::Vector2d(1, 0), false}});
  ASSERT_EQ(g.lineality.size(), 1u);
  EXPECT_NEAR(std::abs(g.lineality[0](1)), 1.0, 1e-12);
  EXPECT_NEAR(g.lineality[0](0), 0.0, 1e-12);
  EXPECT_TRUE(oracle::same_rays(g.rays, {Eigen::Vector2d(-1, 0)}));
}

TEST(DoubleDescription, EqualityLeavesALine) {
  const ConeGenerators g = halfspaces_to_generators(2, {{Eigen::Vector2d(1, 0), true}});
  EXPECT_TRUE(g.rays.empty());
  ASSERT_EQ(g.lineality.size(), 1u);
  EXPECT_NEAR(std::abs(g.lineality[0](1)), 1.0, 1e-12);
}

TEST(DoubleDescription, NoConstraintsGiveWholeSpace) {
  const ConeGenerators g = halfspaces_to_generators(3, {});
  EXPECT_TRUE(g.rays.empty());
  EXPECT_EQ(g.lineality.size(), 3u);
}

TEST(DoubleDescription, InfeasibleDirectionsCollapseToOrigin) {
  const ConeGenerators g = halfspaces_to_generators(
      1, {{Eigen::VectorXd::Constant(1, 1.0), false}, {Eigen::VectorXd::Constant(1, -1.0), false}});
  EXPECT_TRUE(g.rays.empty());
  EXPECT_TRUE(g.lineality.empty());
}

// Pointed cones with random normals against brute-force ray enumeration.
TEST(DoubleDescription, MatchesSubsetEnumerationOnRandomCones) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> small(-2, 2);
  int compared = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int dim = 2 + trial % 3;
    const int count = dim + trial % 5;
    std::vector<Eigen::VectorXd> normals;
    for (int k = 0; k < count; ++k) {
      Eigen::VectorXd v(dim);
      for (int i = 0; i < dim; ++i) v(i) = trial % 2 ? normal(rng) : small(rng);
      if (v.cwiseAbs().maxCoeff() > 0.0) normals.push_back(v);
    }
    const ConeGenerators g = halfspaces_to_generators(dim, inequalities(normals));
    if (!g.lineality.empty()) continue;  // the oracle handles pointed cones only
    EXPECT_TRUE(oracle::same_rays(g.rays, oracle::extreme_rays(normals, dim))) << "trial " << trial;
    ++compared;
  }
  EXPECT_GT(compared, 60);
}

// Facets of cone(rays) are the extreme rays of its Euclidean dual.
TEST(DoubleDescription, FacetsMatchDualRayEnumeration) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(0.1, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 2 + trial % 3;
    std::vector<Eigen::VectorXd> rays;
    for (int k = 0; k < dim + 2; ++k) {
      Eigen::VectorXd v(dim);
      for (int i = 0; i < dim; ++i) v(i) = pos(rng);
      rays.push_back(v);
    }
    const std::vector<ConeConstraint> h = generators_to_halfspaces(dim, rays, {});
    std::vector<Eigen::VectorXd> normals;
    for (const auto& c : h) {
      ASSERT_FALSE(c.equality);
      normals.push_back(c.normal);
      for (const auto& r : rays) EXPECT_LE(c.normal.dot(r), 1e-9);
    }
    EXPECT_TRUE(oracle::same_rays(normals, oracle::extreme_rays(rays, dim))) << "trial " << trial;
  }
}

TEST(DoubleDescription, LowerDimensionalGeneratorsGiveEqualities) {
  const std::vector<ConeConstraint> h =
      generators_to_halfspaces(3, {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0)}, {});
  int equalities = 0;
  for (const auto& c : h) {
    if (c.equality) {
      ++equalities;
      EXPECT_NEAR(std::abs(c.normal(2)) / c.normal.cwiseAbs().maxCoeff(), 1.0, 1e-12);
    }
  }
  EXPECT_EQ(equalities, 1);
}

}  // namespace
}  // namespace superhedge

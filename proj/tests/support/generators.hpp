#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "superhedge/cones.hpp"
#include "superhedge/market.hpp"

// Seeded generators for the property batteries.
namespace superhedge::testgen {

// S0 = 1, S1 = (2, 1, 0.5), uniform P.
MarketModel trinomial();

// Arbitrage-free tree: 1 to 3 periods, 1 to 3 assets, at most 12 terminal
// states. Every node carries a strictly positive martingale weighting, and
// some draws make the last asset a combination of the others.
MarketModel random_market(std::uint64_t seed);

// Random vectors, calls, puts and one replicable claim.
std::vector<Claim> random_claims(const MarketModel& m, std::mt19937_64& rng, int count);

struct RandomCone {
  PolyCone cone;
  Eigen::VectorXd weights;
};

// dim in [1, max_dim], 1 to max_generators generators, some linear, some
// with small integer entries to force degeneracy.
RandomCone random_cone(std::uint64_t seed, int max_dim = 6, int max_generators = 12);

// Strictly positive density with sum p_i z_i = 1.
Eigen::VectorXd random_density(const Eigen::VectorXd& p, std::mt19937_64& rng);

}  // namespace superhedge::testgen

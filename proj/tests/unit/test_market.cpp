#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "superhedge/error.hpp"
#include "superhedge/market.hpp"

namespace superhedge {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kParseError;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

TEST(Market, TrinomialShape) {
  const MarketModel m = testgen::trinomial();
  EXPECT_EQ(m.num_states(), 3);
  EXPECT_EQ(m.num_assets(), 1);
  EXPECT_EQ(m.horizon(), 1);
  EXPECT_NEAR(m.reference_probabilities().sum(), 1.0, 1e-15);
  const GainsSpace g = gains_space(m);
  ASSERT_EQ(g.generators.size(), 1u);
  EXPECT_TRUE(g.linear);
  EXPECT_EQ(g.matrix().rows(), 3);
  EXPECT_NEAR(g.generators[0].payoff(0), 1.0, 1e-15);
  EXPECT_NEAR(g.generators[0].payoff(1), 0.0, 1e-15);
  EXPECT_NEAR(g.generators[0].payoff(2), -0.5, 1e-15);
}

TEST(Market, TwoPeriodGainsSupportedBelowTheirNode) {
  const MarketModel m = build_market(1, {{"r", std::nullopt, 1.0, {1.0}},
                                         {"u", "r", 0.5, {2.0}},
                                         {"d", "r", 0.5, {0.5}},
                                         {"uu", "u", 0.5, {4.0}},
                                         {"ud", "u", 0.5, {1.0}},
                                         {"du", "d", 0.5, {1.0}},
                                         {"dd", "d", 0.5, {0.25}}});
  EXPECT_EQ(m.num_states(), 4);
  EXPECT_EQ(m.horizon(), 2);
  const GainsSpace g = gains_space(m);
  ASSERT_EQ(g.generators.size(), 3u);
  for (const auto& gen : g.generators) {
    const auto& below = m.leaves_below(gen.node);
    for (int s = 0; s < m.num_states(); ++s) {
      if (std::find(below.begin(), below.end(), s) == below.end()) EXPECT_EQ(gen.payoff(s), 0.0);
    }
  }
  EXPECT_EQ(m.ancestor_at(3, 1), 2);
}

TEST(Market, ValidationErrors) {
  EXPECT_NE(message_of([] {
              build_market(1, {{"r", std::nullopt, 1.0, {1.0}}, {"b", "nowhere", 1.0, {1.0}}});
            }).find("unknown parent"),
            std::string::npos);
  EXPECT_EQ(code_of([] {
              build_market(1, {{"r", std::nullopt, 1.0, {1.0}}, {"r", "r", 1.0, {1.0}}});
            }),
            ErrorCode::kValidationError);
  EXPECT_EQ(code_of([] {
              build_market(1, {{"r", std::nullopt, 1.0, {1.0}},
                               {"a", "r", 0.6, {1.0}},
                               {"b", "r", 0.6, {1.0}}});
            }),
            ErrorCode::kValidationError);
  EXPECT_EQ(code_of([] {
              build_market(1, {{"r", std::nullopt, 1.0, {1.0}},
                               {"a", "r", 1.0, {2.0}},
                               {"b", "r", 0.0, {0.5}}});
            }),
            ErrorCode::kValidationError);
  EXPECT_EQ(code_of([] {
              build_market(1, {{"r", std::nullopt, 1.0, {1.0}},
                               {"a", "r", 0.5, {1.0}},
                               {"b", "r", 0.5, {1.0}},
                               {"c", "a", 1.0, {1.0}}});
            }),
            ErrorCode::kValidationError);
  EXPECT_EQ(code_of([] { build_market(2, {{"r", std::nullopt, 1.0, {1.0}}}); }),
            ErrorCode::kValidationError);
}

TEST(Claims, CallPutAndVector) {
  const MarketModel m = testgen::trinomial();
  const Claim call = make_claim(m, {ClaimSpec::Type::kCall, 1.0, 0, {}});
  const Claim put = make_claim(m, {ClaimSpec::Type::kPut, 1.0, 0, {}});
  EXPECT_EQ(call.payoff, Eigen::Vector3d(1.0, 0.0, 0.0));
  EXPECT_EQ(put.payoff, Eigen::Vector3d(0.0, 0.0, 0.5));
  EXPECT_EQ(code_of([&] { make_claim(m, {ClaimSpec::Type::kVector, 0.0, 0, {1.0, 2.0}}); }),
            ErrorCode::kDimensionError);
  EXPECT_EQ(code_of([&] { make_claim(m, {ClaimSpec::Type::kCall, 1.0, 3, {}}); }),
            ErrorCode::kDimensionError);
}

TEST(Sequences, GeometricAndPowerLawNormalize) {
  const Sequence g = geometric_sequence(0.5);
  double total = 0.0;
  for (std::int64_t k = g.first_index; k < 80; ++k) total += g(k);
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_NEAR(g(1), 0.5, 1e-16);

  const Sequence pl = powerlaw_sequence(2.0);
  const double c = 6.0 / (std::numbers::pi * std::numbers::pi);
  EXPECT_NEAR(pl(1), c, 1e-15);
  EXPECT_NEAR(pl(10), c / 100.0, 1e-16);
  EXPECT_NEAR(std::exp(pl.log_value(1000)), pl(1000), 1e-20);

  EXPECT_EQ(code_of([] { geometric_sequence(1.0); }), ErrorCode::kValidationError);
  EXPECT_EQ(code_of([] { powerlaw_sequence(1.0); }), ErrorCode::kValidationError);
}

TEST(Sequences, TruncatedMarketRenormalizes) {
  const MarketModel m = truncated_market(geometric_sequence(0.9), 10, [](std::int64_t k) { return double(k); }, 2.0);
  EXPECT_EQ(m.num_states(), 10);
  EXPECT_NEAR(m.reference_probabilities().sum(), 1.0, 1e-12);
  const Eigen::VectorXd& p = m.reference_probabilities();
  EXPECT_NEAR(p(1) / p(0), 0.9, 1e-12);
}

TEST(RandomMarkets, RespectSizeLimits) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const MarketModel m = testgen::random_market(seed);
    EXPECT_LE(m.num_states(), 12);
    EXPECT_GE(m.horizon(), 1);
    EXPECT_LE(m.horizon(), 3);
    EXPECT_LE(m.num_assets(), 3);
  }
}

}  // namespace
}  // namespace superhedge

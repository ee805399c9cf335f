#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "cascade/oracle/oracles.hpp"

using namespace cascade::oracle;

namespace {

// Closed forms restated here so the oracle tests do not depend on the
// analytic module either.
double collision_closed(double u) { return 1.0 - std::exp(-u) * (1.0 - u); }
double retry_closed(double p, int R) { return (1.0 - std::pow(p, R)) / (1.0 - p); }

OracleConfig config(std::uint64_t trials = 1'000'000, std::uint64_t seed = 1)
{
  OracleConfig c;
  c.trials = trials;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(OracleConfigTest, Validation)
{
  EXPECT_NO_THROW(config().validate());
  EXPECT_THROW(config(1).validate(), std::invalid_argument);
  auto c = config();
  c.confidence = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = config();
  c.family_size = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(OracleConfigTest, CriticalValues)
{
  EXPECT_NEAR(critical_value(0.95, 1), 1.959963984540054, 1e-9);
  EXPECT_NEAR(critical_value(0.99, 1), 2.5758293035489, 1e-9);
  // Bonferroni over 50 intervals at 99%: two-sided alpha = 2e-4.
  EXPECT_NEAR(critical_value(0.99, 50), 3.71901648545568, 1e-8);
}

TEST(CollisionOracleTest, ExactEndpoints)
{
  const auto zero = mc_collision_probability(0.0, 16e-3, config(100'000));
  EXPECT_EQ(zero.value, 0.0);
  EXPECT_EQ(zero.half_width, 0.0);
  EXPECT_EQ(mc_collision_probability(1.0, 16e-3, config(100'000)).value, 1.0);
}

TEST(CollisionOracleTest, BracketsClosedFormAtHalf)
{
  const auto e = mc_collision_probability(0.5, 16e-3, config());
  EXPECT_TRUE(e.brackets(collision_closed(0.5))) << e.value << " +- " << e.half_width;
  EXPECT_NEAR(e.value, 0.6967, 5e-3);
  EXPECT_LT(e.half_width, 2e-3);
}

TEST(CollisionOracleTest, FrameLengthIsIrrelevant)
{
  const auto a = mc_collision_probability(0.3, 1e-3, config(200'000, 5));
  const auto b = mc_collision_probability(0.3, 16e-3, config(200'000, 5));
  EXPECT_NEAR(a.value, b.value, 1e-12);
}

TEST(RetryOracleTest, ExactEndpointsAndInterior)
{
  EXPECT_EQ(mc_mean_retry_count(0.0, 7, config(100'000)).value, 1.0);
  EXPECT_EQ(mc_mean_retry_count(1.0, 7, config(100'000)).value, 7.0);
  const auto e = mc_mean_retry_count(0.5, 7, config());
  EXPECT_TRUE(e.brackets(retry_closed(0.5, 7))) << e.value << " +- " << e.half_width;
  EXPECT_NEAR(e.value, 1.9844, 1e-2);
}

TEST(RetryOracleTest, RejectsBadInput)
{
  EXPECT_THROW(mc_mean_retry_count(1.5, 7, config(100)), std::invalid_argument);
  EXPECT_THROW(mc_mean_retry_count(0.5, 0, config(100)), std::invalid_argument);
  EXPECT_THROW(mc_collision_probability(-0.5, 1e-3, config(100)), std::invalid_argument);
}

TEST(OracleDeterminismTest, SameSeedSameEstimate)
{
  const auto a = mc_collision_probability(0.4, 1e-3, config(50'000, 9));
  const auto b = mc_collision_probability(0.4, 1e-3, config(50'000, 9));
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.half_width, b.half_width);
}

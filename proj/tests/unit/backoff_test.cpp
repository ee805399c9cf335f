#include <gtest/gtest.h>

#include <stdexcept>

#include "cascade/analytic/dynamics.hpp"
#include "cascade/oracle/oracles.hpp"

using cascade::analytic::backoff_success_probability;
using cascade::oracle::brute_force_backoff_success;

TEST(BackoffSuccessTest, TwelveMillisecondFrame)
{
  // 0.0593599654936 from an independent high-precision summation.
  EXPECT_NEAR(backoff_success_probability(12e-3, 20e-6, 1023), 0.0593599654936, 1e-12);
  EXPECT_NEAR(backoff_success_probability(12e-3, 20e-6, 1023), 0.059, 1e-3);
}

TEST(BackoffSuccessTest, ShortFrameAndDegenerateCases)
{
  EXPECT_NEAR(backoff_success_probability(1e-3, 20e-6, 1023), 0.718894746021768, 1e-12);
  // tx = 0: every draw n > 0 contributes 1.
  EXPECT_EQ(backoff_success_probability(0.0, 20e-6, 1023), 1023.0 / 1024.0);
  // Exactly at the window edge the last term is rounding noise.
  EXPECT_NEAR(backoff_success_probability(20.46e-3, 20e-6, 1023), 0.0, 1e-15);
  EXPECT_EQ(backoff_success_probability(20.47e-3, 20e-6, 1023), 0.0);
  EXPECT_EQ(backoff_success_probability(25e-3, 20e-6, 1023), 0.0);
}

TEST(BackoffSuccessTest, RejectsBadInput)
{
  EXPECT_THROW(backoff_success_probability(-1.0, 20e-6, 1023), std::invalid_argument);
  EXPECT_THROW(backoff_success_probability(1e-3, 0.0, 1023), std::invalid_argument);
  EXPECT_THROW(backoff_success_probability(1e-3, 20e-6, 0), std::invalid_argument);
}

TEST(BackoffSuccessTest, BitIdenticalToBruteForce)
{
  for (double tx : {0.0, 1e-4, 1e-3, 5e-3, 12e-3, 16e-3, 20.46e-3, 21e-3}) {
    for (double slot : {9e-6, 20e-6}) {
      for (int cw : {1, 31, 255, 1023}) {
        EXPECT_EQ(backoff_success_probability(tx, slot, cw), brute_force_backoff_success(tx, slot, cw))
            << "tx=" << tx << " slot=" << slot << " cw=" << cw;
      }
    }
  }
}

TEST(BruteForceBackoffTest, EmptyWindow)
{
  EXPECT_EQ(brute_force_backoff_success(12e-3, 20e-6, 0), 0.0);
  EXPECT_NEAR(brute_force_backoff_success(12e-3, 20e-6, 1023), 0.059, 5e-4);
}

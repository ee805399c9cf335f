#include <gtest/gtest.h>

#include <stdexcept>

#include "cascade/mac/minstrel.hpp"
#include "cascade/mac/scenario.hpp"

using namespace cascade::mac;

namespace {

constexpr double kBits = 16000.0;  // 2000-byte frames

RateState ladder()
{
  return make_rate_state(kMinstrelRates, kBits, 0.25);
}

// One statistics window with `attempts` attempts per rate, `successes[i]` of them successful.
RateState observe(RateState s, std::array<int, 4> successes, int attempts = 10)
{
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < attempts; ++k)
      record_attempt(s, i, k < successes[i]);
  }
  return minstrel_update(std::move(s));
}

}  // namespace

TEST(MinstrelStateTest, LadderValidationAndInitialRanking)
{
  const auto s = ladder();
  ASSERT_EQ(s.rates.size(), 4u);
  EXPECT_DOUBLE_EQ(s.rates[0].tx_time, 16e-3);
  EXPECT_EQ(s.best_throughput, 3);
  EXPECT_EQ(s.second_throughput, 2);
  EXPECT_EQ(s.best_probability, 3);
  const double bad[] = {2e6, 1e6};
  EXPECT_THROW(make_rate_state(bad, kBits, 0.25), std::invalid_argument);
  EXPECT_THROW(make_rate_state(std::span<const double>{}, kBits, 0.25), std::invalid_argument);
}

TEST(MinstrelStateTest, SegmentRetryCounts)
{
  const auto s = ladder();
  EXPECT_EQ(s.rates[3].retry_count, 3);  // 11 Mb/s
  EXPECT_EQ(s.rates[2].retry_count, 1);
  EXPECT_EQ(s.rates[1].retry_count, 1);
  EXPECT_EQ(s.rates[0].retry_count, 1);
  RetryTiming timing;
  timing.max_retry = 7;
  // Backoff alone fills the segment after five attempts, so tiny frames stop short of the cap.
  EXPECT_EQ(segment_retry_count(1e-5, timing), 5);
  timing.max_retry = 2;
  EXPECT_EQ(segment_retry_count(1e-5, timing), 2);
  EXPECT_THROW(segment_retry_count(0.0, timing), std::invalid_argument);
}

TEST(MinstrelUpdateTest, FirstWindowInitialisesThenEwma)
{
  auto s = observe(ladder(), {10, 10, 10, 5});
  EXPECT_DOUBLE_EQ(s.rates[3].ewma_prob, 0.5);
  s = observe(std::move(s), {10, 10, 10, 10});
  // new = 0.75 * current + 0.25 * old
  EXPECT_DOUBLE_EQ(s.rates[3].ewma_prob, 0.75 * 1.0 + 0.25 * 0.5);
  EXPECT_EQ(s.rates[3].window_attempts, 0u);
  EXPECT_EQ(s.rates[3].total_attempts, 20u);
}

TEST(MinstrelUpdateTest, AllSuccessOrdersByNominalRate)
{
  const auto s = observe(ladder(), {10, 10, 10, 10});
  EXPECT_EQ(s.best_throughput, 3);
  EXPECT_EQ(s.second_throughput, 2);
  const auto chain = select_retry_chain(s, false, 0);
  EXPECT_EQ(chain, (RetryChain{3, 2, 3, 0}));
}

TEST(MinstrelUpdateTest, PersistentCollisionsMigrateToLowestRate)
{
  auto s = ladder();
  for (int w = 0; w < 5; ++w)
    s = observe(std::move(s), {0, 0, 0, 0});
  EXPECT_EQ(s.best_throughput, 0);
  EXPECT_EQ(select_retry_chain(s, false, 0)[0], 0);
}

TEST(MinstrelUpdateTest, LowProbabilityRateScoresZero)
{
  // 11 Mb/s at 5% would still beat 1 Mb/s at 100% on raw throughput.
  const auto s = observe(ladder(), {20, 0, 0, 1}, 20);
  EXPECT_EQ(s.rates[3].throughput, 0.0);
  EXPECT_EQ(s.best_throughput, 0);
  EXPECT_EQ(s.best_probability, 0);
}

TEST(MinstrelUpdateTest, NoHistoryKeepsRanking)
{
  const auto s = minstrel_update(ladder());
  EXPECT_EQ(s.best_throughput, 3);
  EXPECT_EQ(s.second_throughput, 2);
}

TEST(RetryChainTest, TableColumns)
{
  auto s = observe(ladder(), {10, 10, 10, 4});  // 11 Mb/s at 40%: 5.5 Mb/s is best
  ASSERT_EQ(s.best_throughput, 2);
  const int best = s.best_throughput;
  const int second = s.second_throughput;
  const int prob = s.best_probability;
  EXPECT_EQ(select_retry_chain(s, false, 1), (RetryChain{best, second, prob, 0}));
  // Random rate slower than best: best first, random second.
  EXPECT_EQ(select_retry_chain(s, true, 1), (RetryChain{best, 1, prob, 0}));
  // Random rate faster than best: random first.
  EXPECT_EQ(select_retry_chain(s, true, 3), (RetryChain{3, best, prob, 0}));
  // Drawing the best rate degrades to a normal chain.
  EXPECT_EQ(select_retry_chain(s, true, best), (RetryChain{best, second, prob, 0}));
  EXPECT_THROW(select_retry_chain(s, true, 7), std::out_of_range);
}

TEST(RetryChainTest, StageAttempts)
{
  const auto s = ladder();
  const auto counts = chain_attempts(s, RetryChain{3, 2, 3, 0});
  EXPECT_EQ(counts, (std::array<int, 4>{3, 1, 3, 1}));
  EXPECT_EQ(stage_of_attempt(counts, 1), 0);
  EXPECT_EQ(stage_of_attempt(counts, 3), 0);
  EXPECT_EQ(stage_of_attempt(counts, 4), 1);
  EXPECT_EQ(stage_of_attempt(counts, 7), 2);
  EXPECT_EQ(stage_of_attempt(counts, 8), 3);
  EXPECT_EQ(stage_of_attempt(counts, 9), -1);
}

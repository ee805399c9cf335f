#include <gtest/gtest.h>

#include <stdexcept>

#include "cascade/mac/contention.hpp"
#include "cascade/mac/topology.hpp"

using namespace cascade::mac;

TEST(ContentionWindowTest, DoublesUpToTheCap)
{
  EXPECT_EQ(contention_window(1, 31, 1023), 31);
  EXPECT_EQ(contention_window(2, 31, 1023), 63);
  EXPECT_EQ(contention_window(5, 31, 1023), 511);
  EXPECT_EQ(contention_window(6, 31, 1023), 1023);
  EXPECT_EQ(contention_window(7, 31, 1023), 1023);
  EXPECT_EQ(contention_window(200, 31, 1023), 1023);
}

TEST(TopologyTest, LinearChain)
{
  const auto t = build_topology(TopologyKind::Linear, 41);
  EXPECT_EQ(t.edge_count(), 40);
  EXPECT_TRUE(t.interferers[0].empty());
  EXPECT_EQ(t.interferers[1], std::vector<int>{0});
  EXPECT_EQ(t.victims[39], std::vector<int>{40});
  EXPECT_TRUE(t.victims[40].empty());
  for (const auto& s : t.sensed)
    EXPECT_TRUE(s.empty());
}

TEST(TopologyTest, RingClosesTheChain)
{
  const auto t = build_topology(TopologyKind::Ring, 41);
  EXPECT_EQ(t.edge_count(), 41);
  EXPECT_EQ(t.interferers[0], std::vector<int>{40});
  EXPECT_EQ(t.victims[40], std::vector<int>{0});
}

TEST(TopologyTest, ConflictSets)
{
  const auto t = build_topology(TopologyKind::Linear, 5);
  EXPECT_EQ(t.conflicts(0), std::vector<int>{1});
  EXPECT_EQ(t.conflicts(2), (std::vector<int>{1, 3}));
  EXPECT_EQ(t.conflicts(4), std::vector<int>{3});
}

TEST(TopologyTest, RejectsTinyNetworks)
{
  EXPECT_THROW(build_topology(TopologyKind::Linear, 1), std::invalid_argument);
}

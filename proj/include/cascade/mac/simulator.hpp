#pragma once

#include <cstdint>
#include <vector>

#include "cascade/mac/scenario.hpp"

namespace cascade::mac {

struct NodeStats {
  // Lifetime counters over [0, duration]; generated == delivered + dropped + queued.
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t collided = 0;  // failed attempts
  std::uint64_t dropped = 0;   // retry limit exhausted
  std::uint64_t queued = 0;    // still pending at the end, including the head of line
  std::uint64_t attempts = 0;

  // Measurement window [warmup, duration].
  std::uint64_t delivered_measured = 0;
  double busy_seconds = 0.0;
  double utilization = 0.0;
  double throughput_bps = 0.0;
  double mean_bit_rate = 0.0;  // over attempts started in the window; 0 if none
};

/// Per-node series indexed [node][window]; window k covers [k*w, (k+1)*w).
struct TimeSeries {
  double window = 1.0;
  std::vector<std::vector<double>> utilization;
  std::vector<std::vector<double>> throughput_bps;
  std::vector<std::vector<double>> bit_rate;  // attempt average, 0 when idle
};

struct TrafficStats {
  std::vector<NodeStats> nodes;
  TimeSeries series;
  double measured_duration = 0.0;
  std::uint64_t events = 0;
};

/// Runs one scenario to completion. Deterministic in the spec (seed included).
/// Throws InvalidScenario for a misconfigured spec.
TrafficStats run_simulation(const ScenarioSpec& spec);

}  // namespace cascade::mac

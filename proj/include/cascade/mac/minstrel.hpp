#pragma once

// Minstrel-lite: per-rate EWMA success statistics and the four-stage retry
// chain (best throughput, second best or lookaround rate, best probability,
// lowest base rate).

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace cascade::mac {

struct RateStats {
  double bit_rate = 0.0;
  double tx_time = 0.0;  // airtime of one attempt, seconds
  std::uint64_t window_attempts = 0;
  std::uint64_t window_successes = 0;
  std::uint64_t total_attempts = 0;
  std::uint64_t total_successes = 0;
  double ewma_prob = 0.0;
  bool has_history = false;
  /// Attempts this rate gets when it occupies a chain stage.
  int retry_count = 1;
  /// Expected successful packets per second if sent back to back at this
  /// rate; 0 while ewma_prob < 0.1.
  double throughput = 0.0;
};

struct RateState {
  std::vector<RateStats> rates;  // ascending bit rate; index 0 is the base rate
  /// Weight of the previous estimate in the EWMA.
  double ewma_weight = 0.25;
  int best_throughput = 0;
  int second_throughput = 0;
  int best_probability = 0;

  [[nodiscard]] int lowest() const noexcept { return 0; }
};

using RetryChain = std::array<int, 4>;

/// Inputs of the per-rate retry budget: a rate keeps retrying while the
/// cumulative airtime plus mean backoff stays inside `segment`.
struct RetryTiming {
  double slot = 20e-6;
  int cw1 = 31;
  int cw_max = 1023;
  double overhead = 60e-6;  // per-attempt idle time besides backoff (DIFS + SIFS)
  double segment = 6e-3;
  int max_retry = 7;
};

/// Attempts granted to one rate whose single attempt lasts tx_time; at
/// least 1, at most timing.max_retry.
int segment_retry_count(double tx_time, const RetryTiming& timing);

RateState make_rate_state(std::span<const double> bit_rates, double packet_bits, double ewma_weight,
                          const RetryTiming& timing = {});

/// Counts one attempt at rate index `rate`.
void record_attempt(RateState& state, int rate, bool success);

/// Folds the window counters into the EWMA estimates, clears them and
/// re-ranks the rates. Called once per statistics interval.
RateState minstrel_update(RateState state);

/// Retry chain for the next packet. `random_rate` is only consulted for
/// lookaround packets; equal to best_throughput it degrades to a normal chain.
RetryChain select_retry_chain(const RateState& state, bool is_lookaround, int random_rate);

/// Attempts granted to each stage of `chain` (the per-rate retry counts).
std::array<int, 4> chain_attempts(const RateState& state, const RetryChain& chain);

/// Chain stage that carries attempt number `attempt` (1-based), or -1 once
/// the chain is exhausted.
int stage_of_attempt(const std::array<int, 4>& counts, int attempt);

}  // namespace cascade::mac

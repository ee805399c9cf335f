#include "cascade/mac/minstrel.hpp"

#include <algorithm>
#include <stdexcept>

namespace cascade::mac {

namespace {

// Rates whose success estimate falls below this contribute no throughput.
constexpr double kMinUsefulProb = 0.10;

}  // namespace

int segment_retry_count(double tx_time, const RetryTiming& timing)
{
  if (!(tx_time > 0.0) || timing.max_retry < 1)
    throw std::invalid_argument("segment_retry_count: need tx_time > 0 and max_retry >= 1");
  int count = 1;
  int cw = timing.cw1;
  double total = tx_time + timing.overhead;
  while (count < timing.max_retry) {
    total += tx_time + timing.overhead + 0.5 * cw * timing.slot;
    cw = std::min(2 * cw + 1, timing.cw_max);
    if (total >= timing.segment)
      break;
    ++count;
  }
  return count;
}

RateState make_rate_state(std::span<const double> bit_rates, double packet_bits, double ewma_weight,
                          const RetryTiming& timing)
{
  if (bit_rates.empty())
    throw std::invalid_argument("rate ladder is empty");
  RateState state;
  state.ewma_weight = ewma_weight;
  double prev = 0.0;
  for (double r : bit_rates) {
    if (!(r > prev))
      throw std::invalid_argument("rate ladder must be strictly ascending");
    prev = r;
    RateStats s;
    s.bit_rate = r;
    s.tx_time = packet_bits / r;
    s.retry_count = segment_retry_count(s.tx_time, timing);
    state.rates.push_back(s);
  }
  // Untested ladders start ranked by nominal rate.
  const int n = static_cast<int>(state.rates.size());
  state.best_throughput = n - 1;
  state.second_throughput = n > 1 ? n - 2 : n - 1;
  state.best_probability = n - 1;
  return state;
}

void record_attempt(RateState& state, int rate, bool success)
{
  auto& s = state.rates.at(rate);
  ++s.window_attempts;
  ++s.total_attempts;
  if (success) {
    ++s.window_successes;
    ++s.total_successes;
  }
}

RateState minstrel_update(RateState state)
{
  bool any_history = false;
  for (auto& s : state.rates) {
    if (s.window_attempts > 0) {
      const double current = static_cast<double>(s.window_successes) / s.window_attempts;
      s.ewma_prob = s.has_history ? state.ewma_weight * s.ewma_prob + (1.0 - state.ewma_weight) * current
                                  : current;
      s.has_history = true;
    }
    s.window_attempts = 0;
    s.window_successes = 0;
    s.throughput = s.ewma_prob < kMinUsefulProb ? 0.0 : s.ewma_prob / s.tx_time;
    any_history = any_history || s.has_history;
  }
  if (!any_history)
    return state;

  const int n = static_cast<int>(state.rates.size());
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (state.rates[i].throughput > state.rates[best].throughput)
      best = i;
  }
  int second = best == 0 && n > 1 ? 1 : 0;
  for (int i = 0; i < n; ++i) {
    if (i != best && state.rates[i].throughput > state.rates[second].throughput)
      second = i;
  }
  // Highest probability; ties go to the faster estimate.
  int prob = 0;
  for (int i = 1; i < n; ++i) {
    const auto& c = state.rates[i];
    const auto& b = state.rates[prob];
    if (c.ewma_prob > b.ewma_prob || (c.ewma_prob == b.ewma_prob && c.throughput > b.throughput))
      prob = i;
  }
  state.best_throughput = best;
  state.second_throughput = n > 1 ? second : best;
  state.best_probability = prob;
  return state;
}

RetryChain select_retry_chain(const RateState& state, bool is_lookaround, int random_rate)
{
  const int best = state.best_throughput;
  if (!is_lookaround || random_rate == best)
    return {best, state.second_throughput, state.best_probability, state.lowest()};
  if (random_rate < 0 || random_rate >= static_cast<int>(state.rates.size()))
    throw std::out_of_range("lookaround rate index out of range");

  // A slower random rate is tried after the best-throughput rate.
  if (state.rates[random_rate].tx_time > state.rates[best].tx_time)
    return {best, random_rate, state.best_probability, state.lowest()};
  return {random_rate, best, state.best_probability, state.lowest()};
}

std::array<int, 4> chain_attempts(const RateState& state, const RetryChain& chain)
{
  std::array<int, 4> counts{};
  for (int k = 0; k < 4; ++k)
    counts[k] = state.rates.at(chain[k]).retry_count;
  return counts;
}

int stage_of_attempt(const std::array<int, 4>& counts, int attempt)
{
  int cumulative = 0;
  for (int k = 0; k < 4; ++k) {
    cumulative += counts[k];
    if (attempt <= cumulative)
      return k;
  }
  return -1;
}

}  // namespace cascade::mac

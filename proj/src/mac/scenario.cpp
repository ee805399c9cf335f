#include "cascade/mac/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "cascade/util/random.hpp"

namespace cascade::mac {

namespace {

constexpr std::uint64_t kLoadStream = 0x10adULL;

void check(bool ok, const char* key, const std::string& message)
{
  if (!ok)
    throw InvalidScenario(key, message);
}

}  // namespace

std::string_view to_string(RatePolicy p) noexcept
{
  return p == RatePolicy::Minstrel ? "minstrel" : "fixed";
}

std::string_view to_string(AccessMode m) noexcept
{
  return m == AccessMode::Stylized ? "stylized" : "dcf";
}

double ScenarioSpec::min_packet_time() const noexcept
{
  if (policy == RatePolicy::Minstrel)
    return packet_bits() / *std::max_element(std::begin(kMinstrelRates), std::end(kMinstrelRates));
  return packet_time();
}

double ScenarioSpec::peak_attacker_rate() const noexcept
{
  return burst_rate ? std::max(attacker_rate, *burst_rate) : attacker_rate;
}

void ScenarioSpec::validate() const
{
  check(n_pairs >= 2, "n_pairs", "must be at least 2");
  check(arrival_rate >= 0.0, "arrival_rate", "must be non-negative");
  check(attacker_rate >= 0.0, "attacker_rate", "must be non-negative");
  if (burst_rate) {
    check(*burst_rate >= 0.0, "burst_rate", "must be non-negative");
    check(burst_start >= 0.0, "burst_start", "must be non-negative");
    check(burst_end > burst_start, "burst_end", "must be later than burst_start");
  }
  if (load_range) {
    check(load_range->lo > 0.0 && load_range->lo <= load_range->hi && load_range->hi < 1.0,
          "load_range", "needs 0 < lo <= hi < 1");
  }
  check(packet_size > 0, "packet_size", "must be positive");
  check(bit_rate > 0.0, "bit_rate", "must be positive");
  check(retry_limit >= 1, "retry_limit", "must be at least 1");
  check(cw1 >= 0, "cw1", "must be non-negative");
  check(cw_max >= cw1, "cw_max", "must be at least cw1");
  check(slot > 0.0, "slot", "must be positive");
  check(difs >= 0.0, "difs", "must be non-negative");
  check(sifs >= 0.0, "sifs", "must be non-negative");
  check(retry_delay > 0.0, "retry_delay", "must be positive");
  check(duration > 0.0, "duration", "must be positive");
  if (warmup)
    check(*warmup >= 0.0 && *warmup < duration, "warmup", "must lie in [0, duration)");
  check(sample_window > 0.0, "sample_window", "must be positive");
  check(lookaround >= 0.0 && lookaround <= 1.0, "lookaround", "must lie in [0,1]");
  check(ewma >= 0.0 && ewma <= 1.0, "ewma", "must lie in [0,1]");
  check(rate_update_interval > 0.0, "rate_update_interval", "must be positive");
  if (access_mode == AccessMode::Stylized) {
    check(!rts_cts, "rts_cts", "not available in stylized access mode");
    check(policy == RatePolicy::Fixed, "policy", "stylized access mode needs a fixed bit rate");
  }

  // Offered airtime per node cannot exceed the channel.
  constexpr double slack = 1e-9;
  const double t = min_packet_time();
  if (!load_range)
    check(arrival_rate * t <= 1.0 + slack, "arrival_rate", "implied load rho exceeds 1");
  check(attacker_rate * t <= 1.0 + slack, "attacker_rate", "implied load rho exceeds 1");
  if (burst_rate)
    check(*burst_rate * t <= 1.0 + slack, "burst_rate", "implied load rho exceeds 1");
}

std::vector<double> resolve_arrival_rates(const ScenarioSpec& spec)
{
  std::vector<double> rates(spec.n_pairs, spec.arrival_rate);
  rates[0] = spec.attacker_rate;
  if (spec.load_range) {
    RandomStream rng(derive_seed(spec.seed, kLoadStream));
    const double t = spec.packet_time();
    for (int i = 1; i < spec.n_pairs; ++i) {
      const double rho = spec.load_range->lo + (spec.load_range->hi - spec.load_range->lo) * rng.uniform();
      rates[i] = rho / t;
    }
  }
  return rates;
}

double attacker_rate_at(const ScenarioSpec& spec, double t) noexcept
{
  if (spec.burst_rate && t >= spec.burst_start && t < spec.burst_end)
    return *spec.burst_rate;
  return spec.attacker_rate;
}

}  // namespace cascade::mac

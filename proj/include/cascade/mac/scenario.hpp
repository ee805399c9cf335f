#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/mac/topology.hpp"

namespace cascade::mac {

enum class RatePolicy { Fixed, Minstrel };

/// Dcf: 802.11 distributed coordination (DIFS, slotted backoff, FIFO queue).
/// Stylized: no carrier sense or backoff; each node sends one frame at a time
/// from a FIFO of attempts, and a failed attempt rejoins it after an
/// exponential delay (mean retry_delay) so attempts stay Poisson-like.
enum class AccessMode { Dcf, Stylized };

std::string_view to_string(RatePolicy p) noexcept;
std::string_view to_string(AccessMode m) noexcept;

/// Rate ladder available to the Minstrel-lite policy (bits/s).
inline constexpr double kMinstrelRates[] = {1e6, 2e6, 5.5e6, 11e6};

struct LoadRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// Declarative description of one simulation run. Rates in packets/s,
/// durations in seconds, sizes in bytes.
struct ScenarioSpec {
  TopologyKind topology = TopologyKind::Linear;
  int n_pairs = 41;
  double arrival_rate = 8.125;  // lambda_i, i >= 1
  double attacker_rate = 0.0;   // lambda_0 outside the burst window
  std::optional<double> burst_rate;
  double burst_start = 0.0;
  double burst_end = 0.0;
  /// When set, rho_i ~ Uniform(lo, hi) per node i >= 1 (overrides arrival_rate).
  std::optional<LoadRange> load_range;
  int packet_size = 2000;
  double bit_rate = 1e6;
  RatePolicy policy = RatePolicy::Fixed;
  int retry_limit = 7;
  int cw1 = 31;
  int cw_max = 1023;
  double slot = 20e-6;
  double difs = 50e-6;
  double sifs = 10e-6;
  bool rts_cts = false;
  AccessMode access_mode = AccessMode::Dcf;
  double retry_delay = 1.0;  // stylized mode: mean delay before a retry is queued
  double duration = 1000.0;
  std::optional<double> warmup;  // default: 10% of duration
  double sample_window = 1.0;
  double lookaround = 0.1;
  double ewma = 0.25;
  double rate_update_interval = 0.1;
  std::uint64_t seed = 1;

  [[nodiscard]] double packet_bits() const noexcept { return packet_size * 8.0; }
  /// Airtime of one attempt at the fixed bit rate.
  [[nodiscard]] double packet_time() const noexcept { return packet_bits() / bit_rate; }
  /// Shortest attempt airtime any policy can produce.
  [[nodiscard]] double min_packet_time() const noexcept;
  [[nodiscard]] double effective_warmup() const noexcept { return warmup.value_or(0.1 * duration); }
  /// Peak arrival rate of the attacker over the run.
  [[nodiscard]] double peak_attacker_rate() const noexcept;

  /// Throws InvalidScenario naming the offending key.
  void validate() const;
};

class InvalidScenario : public std::invalid_argument {
 public:
  InvalidScenario(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}
  [[nodiscard]] const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Per-node base arrival rates (packets/s). Draws heterogeneous loads from a
/// stream derived from the scenario seed.
std::vector<double> resolve_arrival_rates(const ScenarioSpec& spec);

/// Arrival-rate schedule of node 0 with an optional burst window.
double attacker_rate_at(const ScenarioSpec& spec, double t) noexcept;

}  // namespace cascade::mac

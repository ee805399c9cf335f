#pragma once

// Monte-Carlo and brute-force oracles for the closed forms of the analytic
// model. Deliberately independent: nothing here includes or calls the
// analytic module.

#include <cstdint>

namespace cascade::oracle {

struct OracleConfig {
  /// >= 2. Below ~1e5 the half-width usually exceeds useful tolerances;
  /// callers judge precision from Estimate::half_width.
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  double confidence = 0.99;
  /// Number of simultaneous intervals the confidence applies to
  /// (Bonferroni); 1 gives a plain per-estimate interval.
  int family_size = 1;

  /// Throws std::invalid_argument when out of range.
  void validate() const;
};

struct Estimate {
  double value = 0.0;
  double half_width = 0.0;  // normal-approximation half-width at the configured confidence
  std::uint64_t trials = 0;

  [[nodiscard]] bool brackets(double x) const noexcept
  {
    return x >= value - half_width && x <= value + half_width;
  }
};

/// Two-point quantile z with P(|Z| <= z) = 1 - (1 - confidence) / family_size.
double critical_value(double confidence, int family_size);

/// Samples the conditioning experiment behind the collision law: the
/// interferer is busy with probability u (sure collision); otherwise the
/// frame collides iff an exponential gap of rate u/T ends within T.
Estimate mc_collision_probability(double u, double tx_time, const OracleConfig& config);

/// Independent per-attempt collisions with probability p; attempts counted
/// up to the retry limit.
Estimate mc_mean_retry_count(double p, int retry_limit, const OracleConfig& config);

/// Exhaustive loop over every backoff draw n in 0..cw_max of the uniform-start
/// success ratio (n*slot - T) / (n*slot + T), counted only when n*slot > T.
double brute_force_backoff_success(double tx_time, double slot, int cw_max);

}  // namespace cascade::oracle

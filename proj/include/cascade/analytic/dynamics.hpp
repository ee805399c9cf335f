#pragma once

// Utilization dynamics of a chain of hidden-node pairs.
//
// Node A_{i+1} sees its predecessor A_i busy with probability u_i and the
// next utilization follows u_{i+1} = min{ rho * Gamma(p(u_i)), 1 } where
// p is the per-attempt collision probability and Gamma the mean number of
// attempts under a retry limit. Fixed points of this map are located via
// h_R(w) = w / Gamma(p(w)), which is independent of the load rho.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace cascade::analytic {

/// Maximum number of transmission attempts per packet (first attempt
/// included). May be unbounded, in which case the closed forms for an
/// infinite retry limit are used.
class RetryLimit {
 public:
  explicit RetryLimit(int attempts);
  static RetryLimit unbounded() noexcept { return RetryLimit{}; }

  [[nodiscard]] bool is_unbounded() const noexcept { return attempts_ == 0; }
  /// Throws std::logic_error when unbounded.
  [[nodiscard]] int attempts() const;
  /// 1/R, or 0 when unbounded.
  [[nodiscard]] double reciprocal() const noexcept;

  friend bool operator==(RetryLimit, RetryLimit) = default;

 private:
  RetryLimit() = default;
  int attempts_ = 0;
};

/// Retry limit R with per-node loads. `loads` holds a single entry for the
/// homogeneous case.
struct ModelParams {
  RetryLimit retry_limit;
  std::vector<double> loads;
  double attacker_load = 0.0;

  /// Throws std::invalid_argument when a load leaves (0,1) or the attacker
  /// load leaves [0,1].
  void validate() const;
};

enum class Stability { Stable, Unstable, Marginal };
enum class Regime { AlwaysUncongested, AlwaysCongested, PhaseTransition, Boundary };

std::string_view to_string(Stability s) noexcept;
std::string_view to_string(Regime r) noexcept;

struct FixedPoint {
  double omega = 0.0;
  Stability stability = Stability::Marginal;
  bool is_congested_point = false;
};

/// Fixed points in strictly increasing order.
struct FixedPointSet {
  std::vector<FixedPoint> points;
  [[nodiscard]] std::size_t count() const noexcept { return points.size(); }
};

struct UtilizationSequence {
  std::vector<double> values;
  bool converged = false;
  std::optional<double> limit;
};

struct RegimeReport {
  Regime regime = Regime::Boundary;
  std::optional<double> transition_point;
  FixedPointSet fixed_points;
  /// Set when rho sits within the boundary tolerance of 1/R or h_R^max.
  std::optional<std::string_view> boundary_reason;
};

struct PhaseBounds {
  double lower = 0.0;             // 1/R
  double upper = 0.0;             // h_R^max
  double guaranteed_upper = 0.0;  // h_R(omega_bar)
  double omega_bar = 0.0;         // (3 - sqrt 5)/2
  double asymptotic_bound = 0.0;  // h_inf(omega_bar)

  [[nodiscard]] bool has_transition_region() const noexcept { return upper > lower; }
  [[nodiscard]] bool guaranteed_region_empty() const noexcept { return guaranteed_upper <= lower; }
};

struct Maximum {
  double omega_star = 0.0;
  double value = 0.0;
};

enum class LoadCycling { Truncate, Cycle };

struct IterationOptions {
  int max_steps = 1'000'000;
  double tol = 1e-10;
  LoadCycling cycling = LoadCycling::Truncate;
};

struct SolverOptions {
  int scan_intervals = 10'000;
  double root_tol = 1e-9;
  /// Residual bound a candidate must satisfy to count as a fixed point.
  double residual_tol = 1e-6;
  /// |h'| below this is reported as Marginal.
  double marginal_eps = 1e-8;
  /// Distance from 1/R or h_R^max that is reported as a boundary case.
  double boundary_tol = 1e-6;
};

/// (3 - sqrt 5)/2, the root of 1 - 3w + w^2 in [0,1].
double omega_bar() noexcept;

/// 1 - e^{-u}(1-u): probability that an attempt collides when the hidden
/// neighbour has utilization u.
double collision_probability(double u);

/// sum_{r=1..R} p^{r-1}; R when p = 1 (and +inf for an unbounded limit).
double mean_retry_count(double p, RetryLimit R);

double next_utilization(double u, double rho, RetryLimit R);

/// Iterates next_utilization from u0 using loads[i] at step i. In Truncate
/// mode the sequence has loads.size()+1 entries; in Cycle mode it runs until
/// successive values differ by less than tol or max_steps is reached.
UtilizationSequence utilization_sequence(double u0, std::span<const double> loads,
                                         RetryLimit R, const IterationOptions& opts = {});

/// h_R(w) = w / Gamma(w), continuously extended with h_R(0) = 0.
double h_of_omega(double omega, RetryLimit R);

/// Closed-form derivative of h_R on (0,1].
double h_derivative(double omega, RetryLimit R);

/// Global maximum of h_R on [0,1]: grid scan refined by golden section.
Maximum h_max(RetryLimit R, int grid = 10'000);

FixedPointSet find_fixed_points(double rho, RetryLimit R, const SolverOptions& opts = {});

/// Throws std::invalid_argument when omega is not a fixed point for (rho, R).
Stability classify_stability(double omega, double rho, RetryLimit R,
                             const SolverOptions& opts = {});

RegimeReport classify_regime(double rho, RetryLimit R, const SolverOptions& opts = {});

/// Fixed point the iteration started at u0 converges to.
double limit_of_sequence(double u0, double rho, RetryLimit R, const SolverOptions& opts = {});

PhaseBounds phase_transition_bounds(RetryLimit R);

/// Probability that a transmission of length tx_time fits inside the
/// backoff period of a hidden node drawing uniformly from [0, cw_max]
/// slots, with the transmission start uniform over the backoff plus
/// transmission span. Durations in seconds.
double backoff_success_probability(double tx_time, double slot, int cw_max);

}  // namespace cascade::analytic

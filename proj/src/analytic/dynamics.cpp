#include "cascade/analytic/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cascade/util/numeric.hpp"

namespace cascade::analytic {

namespace {

void require(bool ok, const char* what)
{
  if (!ok)
    throw std::invalid_argument(what);
}

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }
bool in_open_unit_interval(double x) { return x > 0.0 && x < 1.0; }

// Gamma(w) = sum_{r=1..R} p(w)^{r-1}, together with its derivative.
struct GammaValue {
  double value;
  double derivative;
};

GammaValue gamma_with_derivative(double omega, int attempts)
{
  const double p = collision_probability(omega);
  const double dp = std::exp(-omega) * (2.0 - omega);
  double value = 0.0;
  double dvalue = 0.0;
  double power = 1.0;  // p^k
  double prev_power = 0.0;  // p^{k-1}
  for (int k = 0; k < attempts; ++k) {
    value += power;
    dvalue += k * prev_power;
    prev_power = power;
    power *= p;
  }
  return {value, dvalue * dp};
}

}  // namespace

RetryLimit::RetryLimit(int attempts) : attempts_(attempts)
{
  require(attempts >= 1, "retry limit must be >= 1");
}

int RetryLimit::attempts() const
{
  if (is_unbounded())
    throw std::logic_error("retry limit is unbounded");
  return attempts_;
}

double RetryLimit::reciprocal() const noexcept
{
  return is_unbounded() ? 0.0 : 1.0 / attempts_;
}

void ModelParams::validate() const
{
  require(!loads.empty(), "at least one node load is required");
  for (double rho : loads)
    require(in_open_unit_interval(rho), "node load must lie in (0,1)");
  require(in_unit_interval(attacker_load), "attacker load must lie in [0,1]");
}

std::string_view to_string(Stability s) noexcept
{
  switch (s) {
    case Stability::Stable: return "Stable";
    case Stability::Unstable: return "Unstable";
    case Stability::Marginal: return "Marginal";
  }
  return "?";
}

std::string_view to_string(Regime r) noexcept
{
  switch (r) {
    case Regime::AlwaysUncongested: return "AlwaysUncongested";
    case Regime::AlwaysCongested: return "AlwaysCongested";
    case Regime::PhaseTransition: return "PhaseTransition";
    case Regime::Boundary: return "Boundary";
  }
  return "?";
}

double omega_bar() noexcept { return (3.0 - std::sqrt(5.0)) / 2.0; }

double collision_probability(double u)
{
  require(in_unit_interval(u), "utilization must lie in [0,1]");
  // 1 - e^{-u}(1-u) = (1 - e^{-u}) + u e^{-u}
  return std::min(1.0, -std::expm1(-u) + u * std::exp(-u));
}

double mean_retry_count(double p, RetryLimit R)
{
  require(in_unit_interval(p), "collision probability must lie in [0,1]");
  if (R.is_unbounded())
    return p < 1.0 ? 1.0 / (1.0 - p) : std::numeric_limits<double>::infinity();

  // 0^0 = 1: the first attempt always counts.
  double sum = 0.0;
  double power = 1.0;
  for (int r = 0; r < R.attempts(); ++r) {
    sum += power;
    power *= p;
  }
  return sum;
}

double next_utilization(double u, double rho, RetryLimit R)
{
  require(in_unit_interval(u), "utilization must lie in [0,1]");
  require(in_open_unit_interval(rho), "load must lie in (0,1)");
  return std::min(rho * mean_retry_count(collision_probability(u), R), 1.0);
}

UtilizationSequence utilization_sequence(double u0, std::span<const double> loads, RetryLimit R,
                                         const IterationOptions& opts)
{
  require(in_unit_interval(u0), "initial utilization must lie in [0,1]");
  require(!loads.empty(), "at least one load is required");
  require(opts.max_steps >= 1, "max_steps must be positive");
  for (double rho : loads)
    require(in_open_unit_interval(rho), "load must lie in (0,1)");

  UtilizationSequence seq;
  seq.values.push_back(u0);

  const std::size_t steps = opts.cycling == LoadCycling::Truncate
                                ? std::min<std::size_t>(loads.size(), opts.max_steps)
                                : static_cast<std::size_t>(opts.max_steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double next = next_utilization(seq.values.back(), loads[i % loads.size()], R);
    const double delta = std::abs(next - seq.values.back());
    seq.values.push_back(next);
    if (delta < opts.tol) {
      seq.converged = true;
      if (opts.cycling == LoadCycling::Cycle)
        break;
    } else {
      seq.converged = false;
    }
  }
  if (seq.converged)
    seq.limit = seq.values.back();
  return seq;
}

double h_of_omega(double omega, RetryLimit R)
{
  require(in_unit_interval(omega), "omega must lie in [0,1]");
  if (R.is_unbounded())
    return std::exp(-omega) * (1.0 - omega) * omega;
  return omega / mean_retry_count(collision_probability(omega), R);
}

double h_derivative(double omega, RetryLimit R)
{
  require(omega > 0.0 && omega <= 1.0, "h_derivative is defined on (0,1]");
  if (R.is_unbounded())
    return std::exp(-omega) * (1.0 - 3.0 * omega + omega * omega);

  const auto g = gamma_with_derivative(omega, R.attempts());
  return 1.0 / g.value - omega * g.derivative / (g.value * g.value);
}

Maximum h_max(RetryLimit R, int grid)
{
  require(grid >= 1000, "h_max grid must have at least 1000 intervals");

  int best = 0;
  double best_value = h_of_omega(0.0, R);
  for (int i = 1; i <= grid; ++i) {
    const double v = h_of_omega(static_cast<double>(i) / grid, R);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }

  const double a = std::max(0.0, static_cast<double>(best - 1) / grid);
  const double b = std::min(1.0, static_cast<double>(best + 1) / grid);
  auto h = [R](double w) { return h_of_omega(std::clamp(w, 0.0, 1.0), R); };
  auto [w_refined, v_refined] = numeric::golden_section_maximize(h, a, b, 1e-12);

  Maximum result{static_cast<double>(best) / grid, best_value};
  for (const Maximum candidate : {Maximum{w_refined, v_refined}, Maximum{1.0, h(1.0)},
                                  Maximum{omega_bar(), h(omega_bar())}}) {
    if (candidate.value > result.value)
      result = candidate;
  }
  return result;
}

namespace {

Stability stability_of(double omega, double rho, RetryLimit R, const SolverOptions& opts)
{
  if (omega >= 1.0) {
    const double inv = R.reciprocal();
    if (rho > inv)
      return Stability::Stable;
    return Stability::Marginal;
  }
  const double slope = h_derivative(omega, R);
  if (std::abs(slope) < opts.marginal_eps)
    return Stability::Marginal;
  return slope > 0.0 ? Stability::Stable : Stability::Unstable;
}

double fixed_point_residual(double omega, double rho, RetryLimit R)
{
  const double f = rho * mean_retry_count(collision_probability(omega), R);
  return std::abs(std::min(f, 1.0) - omega);
}

}  // namespace

FixedPointSet find_fixed_points(double rho, RetryLimit R, const SolverOptions& opts)
{
  require(in_open_unit_interval(rho), "load must lie in (0,1)");
  require(opts.scan_intervals >= 2, "scan_intervals must be >= 2");

  auto g = [rho, R](double w) { return h_of_omega(w, R) - rho; };

  std::vector<double> roots;
  const int n = opts.scan_intervals;
  double prev_w = 0.0;
  double prev_g = g(0.0);
  for (int i = 1; i <= n; ++i) {
    const double w = static_cast<double>(i) / n;
    const double gw = g(w);
    if (i < n && gw == 0.0) {
      roots.push_back(w);
    } else if ((prev_g < 0.0 && gw > 0.0) || (prev_g > 0.0 && gw < 0.0)) {
      roots.push_back(numeric::bisect(g, prev_w, w, opts.root_tol));
    }
    prev_w = w;
    prev_g = gw;
  }

  const bool saturates = rho >= R.reciprocal();
  if (saturates && !roots.empty() && 1.0 - roots.back() < opts.root_tol)
    roots.pop_back();
  if (!saturates && roots.empty())
    throw std::logic_error("no fixed point found below 1/R: h_R continuity violated");

  FixedPointSet set;
  for (double w : roots) {
    if (fixed_point_residual(w, rho, R) >= opts.residual_tol)
      throw std::logic_error("root of h_R(w) = rho failed the fixed-point residual check");
    set.points.push_back({w, stability_of(w, rho, R, opts), false});
  }
  if (saturates)
    set.points.push_back({1.0, stability_of(1.0, rho, R, opts), true});
  return set;
}

Stability classify_stability(double omega, double rho, RetryLimit R, const SolverOptions& opts)
{
  require(in_unit_interval(omega), "omega must lie in [0,1]");
  require(in_open_unit_interval(rho), "load must lie in (0,1)");
  if (omega == 0.0 || fixed_point_residual(omega, rho, R) >= opts.residual_tol)
    throw std::invalid_argument("omega is not a fixed point of the utilization map");
  return stability_of(omega, rho, R, opts);
}

RegimeReport classify_regime(double rho, RetryLimit R, const SolverOptions& opts)
{
  require(in_open_unit_interval(rho), "load must lie in (0,1)");

  RegimeReport report;
  report.fixed_points = find_fixed_points(rho, R, opts);

  const double inv = R.reciprocal();
  const double hm = h_max(R).value;
  if (std::abs(rho - inv) < opts.boundary_tol) {
    report.regime = Regime::Boundary;
    report.boundary_reason = "load within tolerance of 1/R";
    return report;
  }
  if (hm > inv && std::abs(rho - hm) < opts.boundary_tol) {
    report.regime = Regime::Boundary;
    report.boundary_reason = "load within tolerance of h_R^max (tangent root)";
    return report;
  }

  if (rho < inv) {
    report.regime = Regime::AlwaysUncongested;
  } else if (rho < hm) {
    const auto& pts = report.fixed_points.points;
    if (pts.size() < 2 || !pts.back().is_congested_point)
      throw std::logic_error("phase-transition regime without an interior fixed point and w = 1");
    report.regime = Regime::PhaseTransition;
    report.transition_point = pts[pts.size() - 2].omega;
  } else {
    report.regime = Regime::AlwaysCongested;
  }
  return report;
}

double limit_of_sequence(double u0, double rho, RetryLimit R, const SolverOptions& opts)
{
  require(in_unit_interval(u0), "initial utilization must lie in [0,1]");
  const auto fps = find_fixed_points(rho, R, opts);
  const auto& pts = fps.points;

  for (const auto& p : pts) {
    if (std::abs(u0 - p.omega) <= opts.root_tol)
      return p.omega;
  }
  if (u0 < pts.front().omega)
    return pts.front().omega;
  if (u0 > pts.back().omega)
    return pts.back().omega;

  const auto upper = std::upper_bound(pts.begin(), pts.end(), u0,
                                      [](double u, const FixedPoint& p) { return u < p.omega; });
  const auto lower = std::prev(upper);
  const double f = rho * mean_retry_count(collision_probability(u0), R);
  return f > u0 ? upper->omega : lower->omega;
}

PhaseBounds phase_transition_bounds(RetryLimit R)
{
  PhaseBounds b;
  b.lower = R.reciprocal();
  b.upper = h_max(R).value;
  b.omega_bar = omega_bar();
  b.guaranteed_upper = h_of_omega(b.omega_bar, R);
  b.asymptotic_bound = h_of_omega(b.omega_bar, RetryLimit::unbounded());
  return b;
}

}  // namespace cascade::analytic

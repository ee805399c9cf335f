#include "cascade/runner/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cascade/analytic/dynamics.hpp"
#include "cascade/oracle/oracles.hpp"
#include "cascade/runner/csv.hpp"
#include "cascade/util/random.hpp"

namespace cascade::runner {

namespace {

using analytic::RetryLimit;

constexpr double kFault = 0.01;
constexpr double kTxTime = 16e-3;  // 2000 bytes at 1 Mb/s
constexpr double kFdStep = 1e-6;
constexpr double kFdTolerance = 1e-5;  // relative
constexpr double kLimitTolerance = 1e-4;
constexpr int kDerivativeGrid = 1000;
constexpr int kLimitPoints = 200;

enum Stream : std::uint64_t { kCollision = 1, kRetry, kBackoff, kLimit };

std::string describe(std::initializer_list<std::pair<const char*, double>> params)
{
  std::ostringstream out;
  out.precision(6);
  bool first = true;
  for (const auto& [name, value] : params) {
    out << (first ? "" : " ") << name << '=' << value;
    first = false;
  }
  return out.str();
}

CheckStatus judge(const oracle::Estimate& e, double expected, double tolerance)
{
  if (e.half_width > tolerance)
    return CheckStatus::Imprecise;
  return e.brackets(expected) ? CheckStatus::Pass : CheckStatus::Fail;
}

oracle::OracleConfig config_for(const ValidateOptions& o, Stream stream, int point)
{
  oracle::OracleConfig c;
  c.trials = o.trials;
  c.seed = derive_seed(o.seed, stream, static_cast<std::uint64_t>(point));
  c.confidence = o.confidence;
  c.family_size = o.points;
  return c;
}

void check_collision(const ValidateOptions& o, std::vector<CheckRecord>& out)
{
  const double fault = o.inject_fault ? kFault : 0.0;
  // Endpoints are exact in both routes.
  for (double u : {0.0, 1.0}) {
    const auto e = oracle::mc_collision_probability(u, kTxTime, config_for(o, kCollision, -1));
    const double expected = analytic::collision_probability(u) + fault;
    out.push_back({"collision_probability", describe({{"u", u}}), e.value, expected, e.half_width,
                   e.value == expected ? CheckStatus::Pass : CheckStatus::Fail});
  }
  // Interior draws stay away from 0 and 1 where the normal approximation is poor.
  RandomStream rng(derive_seed(o.seed, kCollision));
  for (int i = 0; i < o.points; ++i) {
    const double u = 0.02 + 0.96 * rng.uniform();
    const auto e = oracle::mc_collision_probability(u, kTxTime, config_for(o, kCollision, i));
    const double expected = analytic::collision_probability(u) + fault;
    out.push_back({"collision_probability", describe({{"u", u}}), e.value, expected, e.half_width,
                   judge(e, expected, o.tolerance)});
  }
}

void check_retry_count(const ValidateOptions& o, std::vector<CheckRecord>& out)
{
  RandomStream rng(derive_seed(o.seed, kRetry));
  for (int i = 0; i < o.points; ++i) {
    const double p = 0.02 + 0.96 * rng.uniform();
    const int R = 1 + static_cast<int>(rng.uniform_int(31));
    const auto e = oracle::mc_mean_retry_count(p, R, config_for(o, kRetry, i));
    const double expected = analytic::mean_retry_count(p, RetryLimit(R));
    out.push_back({"mean_retry_count", describe({{"p", p}, {"R", R}}), e.value, expected, e.half_width,
                   judge(e, expected, o.tolerance * expected)});
  }
}

void check_backoff(const ValidateOptions& o, std::vector<CheckRecord>& out)
{
  struct Point {
    double tx, slot;
    int cw;
  };
  std::vector<Point> pts{{12e-3, 20e-6, 1023}, {1e-3, 20e-6, 1023}, {0.0, 20e-6, 1023},
                         {21e-3, 20e-6, 1023}, {12e-3, 9e-6, 1023}};
  RandomStream rng(derive_seed(o.seed, kBackoff));
  for (int i = 0; i < 20; ++i) {
    const int cw = (2 << rng.uniform_int(8)) - 1;  // 3..1023
    pts.push_back({25e-3 * rng.uniform(), rng.bernoulli(0.5) ? 20e-6 : 9e-6, cw});
  }
  for (const auto& p : pts) {
    const double brute = oracle::brute_force_backoff_success(p.tx, p.slot, p.cw);
    const double closed = analytic::backoff_success_probability(p.tx, p.slot, p.cw);
    out.push_back({"backoff_success", describe({{"tx", p.tx}, {"slot", p.slot}, {"cw_max", p.cw}}), brute, closed, 0.0,
                   brute == closed ? CheckStatus::Pass : CheckStatus::Fail});
  }
}

void check_derivative(std::vector<CheckRecord>& out)
{
  for (int attempts : {4, 7, 10, 32}) {
    const RetryLimit R(attempts);
    double worst = 0.0;
    for (int k = 0; k < kDerivativeGrid; ++k) {
      const double w = (k + 0.5) / kDerivativeGrid;
      const double fd = (analytic::h_of_omega(w + kFdStep, R) - analytic::h_of_omega(w - kFdStep, R)) / (2 * kFdStep);
      const double d = analytic::h_derivative(w, R);
      // Relative error, floored where h' crosses zero at the maximum.
      worst = std::max(worst, std::abs(d - fd) / std::max(std::abs(d), 1e-3));
    }
    out.push_back({"h_derivative", describe({{"R", attempts}, {"grid", kDerivativeGrid}}), worst, 0.0, 0.0,
                   worst <= kFdTolerance ? CheckStatus::Pass : CheckStatus::Fail});
  }
}

void check_limits(const ValidateOptions& o, std::vector<CheckRecord>& out)
{
  RandomStream rng(derive_seed(o.seed, kLimit));
  analytic::IterationOptions iter;
  iter.cycling = analytic::LoadCycling::Cycle;
  double worst = 0.0;
  int used = 0;
  while (used < kLimitPoints) {
    const double u0 = rng.uniform();
    const double rho = 0.01 + 0.49 * rng.uniform();
    const RetryLimit R(1 + static_cast<int>(rng.uniform_int(31)));
    if (analytic::classify_regime(rho, R).regime == analytic::Regime::Boundary)
      continue;
    const double loads[] = {rho};
    const auto seq = analytic::utilization_sequence(u0, loads, R, iter);
    const double empirical = seq.limit.value_or(seq.values.back());
    worst = std::max(worst, std::abs(empirical - analytic::limit_of_sequence(u0, rho, R)));
    ++used;
  }
  out.push_back({"limit_agreement", describe({{"points", kLimitPoints}}), worst, 0.0, 0.0,
                 worst <= kLimitTolerance ? CheckStatus::Pass : CheckStatus::Fail});
}

}  // namespace

std::string_view to_string(CheckStatus s) noexcept
{
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Imprecise: return "imprecise";
  }
  return "?";
}

std::size_t ValidateReport::count(CheckStatus s) const noexcept
{
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [s](const CheckRecord& r) { return r.status == s; }));
}

ValidateReport run_validation(const ValidateOptions& options)
{
  if (options.points < 1)
    throw std::invalid_argument("validation needs at least one point");
  ValidateReport report;
  check_collision(options, report.records);
  check_retry_count(options, report.records);
  check_backoff(options, report.records);
  check_derivative(report.records);
  check_limits(options, report.records);
  return report;
}

void write_validation_csv(const std::filesystem::path& path, const ValidateReport& report)
{
  CsvWriter csv(path, {"suite", "point", "observed", "expected", "half_width", "status"});
  for (const auto& r : report.records) {
    csv.row({r.suite, r.point, format_number(r.observed), format_number(r.expected), format_number(r.half_width),
             std::string(to_string(r.status))});
  }
}

}  // namespace cascade::runner

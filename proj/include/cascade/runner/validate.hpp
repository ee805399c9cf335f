#pragma once

// Cross-checks of the analytic closed forms: Monte-Carlo oracles, the
// brute-force backoff sum, derivative vs finite differences and limit
// agreement of the iteration.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cascade::runner {

/// Imprecise: the oracle half-width exceeds the tolerance, so the point
/// cannot decide agreement. Does not count as a failure.
enum class CheckStatus { Pass, Fail, Imprecise };

std::string_view to_string(CheckStatus s) noexcept;

struct CheckRecord {
  std::string suite;
  std::string point;  // parameters, human readable
  double observed = 0.0;
  double expected = 0.0;
  double half_width = 0.0;  // 0 for deterministic checks
  CheckStatus status = CheckStatus::Pass;
};

struct ValidateOptions {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  int points = 50;           // random points per oracle; also the Bonferroni family size
  double tolerance = 1e-2;   // largest useful oracle half-width (relative for retry counts)
  double confidence = 0.99;
  /// Test hook: perturbs the closed-form collision probability by +0.01.
  bool inject_fault = false;
};

struct ValidateReport {
  std::vector<CheckRecord> records;

  [[nodiscard]] std::size_t count(CheckStatus s) const noexcept;
  [[nodiscard]] bool passed() const noexcept { return count(CheckStatus::Fail) == 0; }
};

ValidateReport run_validation(const ValidateOptions& options);

/// suite,point,observed,expected,half_width,status
void write_validation_csv(const std::filesystem::path& path, const ValidateReport& report);

}  // namespace cascade::runner

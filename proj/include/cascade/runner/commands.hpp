#pragma once

// Back ends of the analyze, sweep and simulate subcommands. Writers create
// files in an existing directory and return their names relative to it.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/analytic/dynamics.hpp"
#include "cascade/mac/scenario.hpp"
#include "cascade/mac/sweep.hpp"

namespace cascade::runner {

/// Inclusive arithmetic grid lo, lo+step, ..., hi.
struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;

  /// Points are lo + k*step (no accumulated drift); hi is included when it
  /// lies within 1e-9*step of the last point.
  [[nodiscard]] std::vector<double> values() const;
};

/// Parses LO:HI:STEP. Throws std::invalid_argument unless step > 0 and lo <= hi.
Grid parse_grid(std::string_view text);

struct AnalyzeReport {
  double rho = 0.0;
  analytic::RetryLimit retry_limit{1};
  analytic::RegimeReport regime;
  analytic::PhaseBounds bounds;
  analytic::Maximum maximum;
};

AnalyzeReport analyze(double rho, analytic::RetryLimit R);
/// Uses the scenario's node load (arrival_rate * packet_time) and retry limit.
AnalyzeReport analyze(const mac::ScenarioSpec& spec);

std::string to_json(const AnalyzeReport& report);
std::string to_text(const AnalyzeReport& report);

enum class SweepKind { AttackerLoad, NodeLoad, HCurve };

/// attacker_load | node_load | h_curve.
SweepKind parse_sweep_kind(std::string_view text);
std::string_view to_string(SweepKind kind) noexcept;

struct SweepRequest {
  SweepKind kind = SweepKind::AttackerLoad;
  mac::ScenarioSpec scenario;
  Grid grid;
  /// node_load and h_curve: one series per entry (0 = unbounded, h_curve only).
  std::vector<int> retry_limits;
  mac::SweepOptions options;
};

/// Default grid of each sweep kind.
Grid default_grid(SweepKind kind);

/// Writes sweep.csv:
///   attacker_load  rho0,u_0,...,u_{N-1}
///   node_load      rho,retry_limit,u_idle,u_saturated,divergence
///   h_curve        omega,h_<R>... (h_inf for an unbounded limit)
std::vector<std::string> run_sweep(const SweepRequest& request, const std::filesystem::path& dir);

/// Writes scenario.txt, nodes.csv, timeseries.csv, throughput.csv and, under
/// the Minstrel policy, bit_rate.csv.
std::vector<std::string> run_simulate(const mac::ScenarioSpec& spec, const std::filesystem::path& dir);

}  // namespace cascade::runner

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cascade/mac/scenario.hpp"
#include "cascade/mac/simulator.hpp"

namespace cascade::mac {

struct SweepOptions {
  int replications = 5;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Utilization per node averaged over replications at one attacker load.
struct AttackerLoadPoint {
  double rho0 = 0.0;
  std::vector<double> utilization;
  std::vector<double> utilization_min;  // across replications
  std::vector<double> utilization_max;
};

/// Limit utilization u_{N-1} with an idle and a saturated attacker.
struct NodeLoadPoint {
  double rho = 0.0;
  double u_idle = 0.0;       // rho0 = 0
  double u_saturated = 0.0;  // rho0 = 1
  [[nodiscard]] double divergence() const noexcept { return u_saturated - u_idle; }
};

/// Seed of replication `rep` at sweep point `point`.
std::uint64_t sweep_seed(std::uint64_t base, std::size_t point, int rep) noexcept;

/// Sets node 0's arrival rate so that its offered load is rho0.
ScenarioSpec with_attacker_load(ScenarioSpec spec, double rho0);
/// Sets the common arrival rate of nodes i >= 1 so that their load is rho.
ScenarioSpec with_node_load(ScenarioSpec spec, double rho);

/// Runs `spec` options.replications times with seeds sweep_seed(spec.seed, 0, rep).
std::vector<TrafficStats> run_replications(const ScenarioSpec& spec, const SweepOptions& options = {});

/// One run_simulation per (rho0, replication) with independent seeds
/// derived from spec.seed.
std::vector<AttackerLoadPoint> sweep_attacker_load(const ScenarioSpec& spec, std::span<const double> rho0_values,
                                                   const SweepOptions& options = {});

/// Divergence scan: u_{N-1} at rho0 = 0 and rho0 = 1 for each node load.
std::vector<NodeLoadPoint> sweep_node_load(const ScenarioSpec& spec, std::span<const double> rho_values,
                                           const SweepOptions& options = {});

}  // namespace cascade::mac

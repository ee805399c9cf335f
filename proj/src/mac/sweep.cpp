#include "cascade/mac/sweep.hpp"

#include <algorithm>
#include <stdexcept>

#include "cascade/mac/simulator.hpp"
#include "cascade/util/parallel.hpp"
#include "cascade/util/random.hpp"

namespace cascade::mac {

namespace {

constexpr std::uint64_t kSweepStream = 0x5eedULL;

void check_options(const SweepOptions& options)
{
  if (options.replications < 1)
    throw std::invalid_argument("replications must be >= 1");
}

}  // namespace

std::uint64_t sweep_seed(std::uint64_t base, std::size_t point, int rep) noexcept
{
  return derive_seed(base ^ kSweepStream, point, static_cast<std::uint64_t>(rep));
}

ScenarioSpec with_attacker_load(ScenarioSpec spec, double rho0)
{
  if (rho0 < 0.0 || rho0 > 1.0)
    throw std::invalid_argument("rho0 must lie in [0,1]");
  spec.attacker_rate = rho0 / spec.packet_time();
  return spec;
}

ScenarioSpec with_node_load(ScenarioSpec spec, double rho)
{
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("rho must lie in [0,1]");
  spec.arrival_rate = rho / spec.packet_time();
  spec.load_range.reset();
  return spec;
}

std::vector<TrafficStats> run_replications(const ScenarioSpec& spec, const SweepOptions& options)
{
  check_options(options);
  spec.validate();
  std::vector<TrafficStats> out(static_cast<std::size_t>(options.replications));
  parallel_for(
      out.size(),
      [&](std::size_t r) {
        ScenarioSpec s = spec;
        s.seed = sweep_seed(spec.seed, 0, static_cast<int>(r));
        out[r] = run_simulation(s);
      },
      options.threads);
  return out;
}

std::vector<AttackerLoadPoint> sweep_attacker_load(const ScenarioSpec& spec, std::span<const double> rho0_values,
                                                   const SweepOptions& options)
{
  check_options(options);
  spec.validate();
  const std::size_t points = rho0_values.size();
  const auto reps = static_cast<std::size_t>(options.replications);
  std::vector<std::vector<double>> runs(points * reps);

  parallel_for(
      points * reps,
      [&](std::size_t k) {
        const std::size_t p = k / reps;
        ScenarioSpec s = with_attacker_load(spec, rho0_values[p]);
        s.seed = sweep_seed(spec.seed, p, static_cast<int>(k % reps));
        const auto stats = run_simulation(s);
        auto& u = runs[k];
        u.reserve(stats.nodes.size());
        for (const auto& n : stats.nodes)
          u.push_back(n.utilization);
      },
      options.threads);

  std::vector<AttackerLoadPoint> out(points);
  const auto n = static_cast<std::size_t>(spec.n_pairs);
  for (std::size_t p = 0; p < points; ++p) {
    auto& pt = out[p];
    pt.rho0 = rho0_values[p];
    pt.utilization.assign(n, 0.0);
    pt.utilization_min.assign(n, 1.0);
    pt.utilization_max.assign(n, 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& u = runs[p * reps + r];
      for (std::size_t i = 0; i < n; ++i) {
        pt.utilization[i] += u[i] / static_cast<double>(reps);
        pt.utilization_min[i] = std::min(pt.utilization_min[i], u[i]);
        pt.utilization_max[i] = std::max(pt.utilization_max[i], u[i]);
      }
    }
  }
  return out;
}

std::vector<NodeLoadPoint> sweep_node_load(const ScenarioSpec& spec, std::span<const double> rho_values,
                                           const SweepOptions& options)
{
  check_options(options);
  const std::size_t points = rho_values.size();
  const auto reps = static_cast<std::size_t>(options.replications);
  // Per point: reps runs with rho0 = 0, then reps with rho0 = 1.
  std::vector<double> last(points * reps * 2);

  parallel_for(
      last.size(),
      [&](std::size_t k) {
        const std::size_t p = k / (2 * reps);
        const bool saturated = (k / reps) % 2 == 1;
        const int rep = static_cast<int>(k % reps);
        ScenarioSpec s = with_attacker_load(with_node_load(spec, rho_values[p]), saturated ? 1.0 : 0.0);
        s.seed = sweep_seed(spec.seed, p, rep);
        last[k] = run_simulation(s).nodes.back().utilization;
      },
      options.threads);

  std::vector<NodeLoadPoint> out(points);
  for (std::size_t p = 0; p < points; ++p) {
    out[p].rho = rho_values[p];
    for (std::size_t r = 0; r < reps; ++r) {
      out[p].u_idle += last[p * 2 * reps + r] / static_cast<double>(reps);
      out[p].u_saturated += last[p * 2 * reps + reps + r] / static_cast<double>(reps);
    }
  }
  return out;
}

}  // namespace cascade::mac

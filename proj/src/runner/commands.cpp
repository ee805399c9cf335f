#include "cascade/runner/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "cascade/mac/simulator.hpp"
#include "cascade/runner/csv.hpp"
#include "cascade/runner/scenario_file.hpp"

namespace cascade::runner {

namespace {

double parse_double(std::string_view text, std::string_view what)
{
  double x = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x))
    throw std::invalid_argument("bad " + std::string(what) + " '" + std::string(text) + "'");
  return x;
}

std::string retry_label(analytic::RetryLimit R)
{
  return R.is_unbounded() ? "inf" : std::to_string(R.attempts());
}

analytic::RetryLimit retry_limit_of(int attempts)
{
  return attempts == 0 ? analytic::RetryLimit::unbounded() : analytic::RetryLimit(attempts);
}

nlohmann::ordered_json fixed_points_json(const analytic::FixedPointSet& set)
{
  auto out = nlohmann::ordered_json::array();
  for (const auto& p : set.points) {
    out.push_back({{"omega", p.omega},
                   {"stability", std::string(analytic::to_string(p.stability))},
                   {"congested", p.is_congested_point}});
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void sweep_attacker_load_csv(const SweepRequest& req, const std::filesystem::path& path)
{
  const auto rho0 = req.grid.values();
  const auto points = mac::sweep_attacker_load(req.scenario, rho0, req.options);
  std::vector<std::string> header{"rho0"};
  for (int i = 0; i < req.scenario.n_pairs; ++i)
    header.push_back("u_" + std::to_string(i));
  CsvWriter csv(path, header);
  for (const auto& p : points) {
    std::vector<std::string> cells{format_number(p.rho0)};
    for (double u : p.utilization)
      cells.push_back(format_number(u));
    csv.row(cells);
  }
}

void sweep_node_load_csv(const SweepRequest& req, const std::filesystem::path& path)
{
  const auto rho = req.grid.values();
  CsvWriter csv(path, {"rho", "retry_limit", "u_idle", "u_saturated", "divergence"});
  for (int R : req.retry_limits) {
    if (R < 1)
      throw std::invalid_argument("node_load sweep needs finite retry limits");
    auto spec = req.scenario;
    spec.retry_limit = R;
    for (const auto& p : mac::sweep_node_load(spec, rho, req.options))
      csv.row({p.rho, static_cast<double>(R), p.u_idle, p.u_saturated, p.divergence()});
  }
}

void sweep_h_curve_csv(const SweepRequest& req, const std::filesystem::path& path)
{
  std::vector<analytic::RetryLimit> limits;
  std::vector<std::string> header{"omega"};
  for (int R : req.retry_limits) {
    limits.push_back(retry_limit_of(R));
    header.push_back("h_" + retry_label(limits.back()));
  }
  CsvWriter csv(path, header);
  for (double w : req.grid.values()) {
    if (w < 0.0 || w > 1.0)
      throw std::invalid_argument("h_curve grid must lie in [0,1]");
    std::vector<std::string> cells{format_number(w)};
    for (auto R : limits)
      cells.push_back(format_number(analytic::h_of_omega(w, R)));
    csv.row(cells);
  }
}

}  // namespace

std::vector<double> Grid::values() const
{
  std::vector<double> out;
  const double span = (hi - lo) / step;
  const auto n = static_cast<long>(std::floor(span + 1e-9));
  for (long k = 0; k <= n; ++k)
    out.push_back(k == n && std::abs(span - n) <= 1e-9 ? hi : lo + k * step);
  return out;
}

Grid parse_grid(std::string_view text)
{
  const auto a = text.find(':');
  const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
  if (b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos)
    throw std::invalid_argument("grid must be LO:HI:STEP, got '" + std::string(text) + "'");
  Grid g{parse_double(text.substr(0, a), "grid start"), parse_double(text.substr(a + 1, b - a - 1), "grid end"),
         parse_double(text.substr(b + 1), "grid step")};
  if (!(g.step > 0.0) || g.lo > g.hi)
    throw std::invalid_argument("grid needs step > 0 and LO <= HI");
  if ((g.hi - g.lo) / g.step > 1e7)
    throw std::invalid_argument("grid has more than 1e7 points");
  return g;
}

AnalyzeReport analyze(double rho, analytic::RetryLimit R)
{
  AnalyzeReport report;
  report.rho = rho;
  report.retry_limit = R;
  report.regime = analytic::classify_regime(rho, R);
  report.bounds = analytic::phase_transition_bounds(R);
  report.maximum = analytic::h_max(R);
  return report;
}

AnalyzeReport analyze(const mac::ScenarioSpec& spec)
{
  return analyze(spec.arrival_rate * spec.packet_time(), analytic::RetryLimit(spec.retry_limit));
}

std::string to_json(const AnalyzeReport& r)
{
  nlohmann::ordered_json j;
  j["rho"] = r.rho;
  j["retry_limit"] = retry_label(r.retry_limit);
  j["regime"] = std::string(analytic::to_string(r.regime.regime));
  j["transition_point"] = r.regime.transition_point ? nlohmann::ordered_json(*r.regime.transition_point) : nullptr;
  j["fixed_points"] = fixed_points_json(r.regime.fixed_points);
  j["warning"] = r.regime.boundary_reason ? nlohmann::ordered_json(std::string(*r.regime.boundary_reason)) : nullptr;
  j["bounds"] = {{"lower", r.bounds.lower},
                 {"upper", r.bounds.upper},
                 {"guaranteed_upper", r.bounds.guaranteed_upper},
                 {"omega_bar", r.bounds.omega_bar},
                 {"asymptotic_bound", r.bounds.asymptotic_bound}};
  j["h_max"] = {{"omega", r.maximum.omega_star}, {"value", r.maximum.value}};
  return j.dump(2) + "\n";
}

std::string to_text(const AnalyzeReport& r)
{
  std::ostringstream out;
  out.precision(6);
  out << "rho = " << r.rho << ", R = " << retry_label(r.retry_limit) << "\n";
  out << "regime: " << analytic::to_string(r.regime.regime);
  if (r.regime.transition_point)
    out << " (transition at omega = " << *r.regime.transition_point << ")";
  out << "\n";
  if (r.regime.boundary_reason)
    out << "warning: " << *r.regime.boundary_reason << "\n";
  for (const auto& p : r.regime.fixed_points.points)
    out << "  fixed point " << p.omega << "  " << analytic::to_string(p.stability) << "\n";
  out << "bounds: 1/R = " << r.bounds.lower << ", h_max = " << r.bounds.upper << " at omega = " << r.maximum.omega_star
      << ", h(omega_bar) = " << r.bounds.guaranteed_upper << ", h_inf(omega_bar) = " << r.bounds.asymptotic_bound
      << "\n";
  return out.str();
}

SweepKind parse_sweep_kind(std::string_view text)
{
  if (text == "attacker_load")
    return SweepKind::AttackerLoad;
  if (text == "node_load")
    return SweepKind::NodeLoad;
  if (text == "h_curve")
    return SweepKind::HCurve;
  throw std::invalid_argument("unknown sweep kind '" + std::string(text) + "'");
}

std::string_view to_string(SweepKind kind) noexcept
{
  switch (kind) {
    case SweepKind::AttackerLoad: return "attacker_load";
    case SweepKind::NodeLoad: return "node_load";
    case SweepKind::HCurve: return "h_curve";
  }
  return "?";
}

Grid default_grid(SweepKind kind)
{
  switch (kind) {
    case SweepKind::AttackerLoad: return {0.1, 0.9, 0.1};
    case SweepKind::NodeLoad: return {0.06, 0.20, 0.01};
    case SweepKind::HCurve: return {0.0, 1.0, 0.001};
  }
  return {};
}

std::vector<std::string> run_sweep(const SweepRequest& request, const std::filesystem::path& dir)
{
  const auto path = dir / "sweep.csv";
  switch (request.kind) {
    case SweepKind::AttackerLoad: sweep_attacker_load_csv(request, path); break;
    case SweepKind::NodeLoad: sweep_node_load_csv(request, path); break;
    case SweepKind::HCurve: sweep_h_curve_csv(request, path); break;
  }
  return {"sweep.csv"};
}

std::vector<std::string> run_simulate(const mac::ScenarioSpec& spec, const std::filesystem::path& dir)
{
  const auto stats = mac::run_simulation(spec);
  write_text(dir / "scenario.txt", format_scenario(spec));
  write_nodes_csv(dir / "nodes.csv", stats);
  write_timeseries_csv(dir / "timeseries.csv", stats);
  write_throughput_csv(dir / "throughput.csv", stats);
  std::vector<std::string> files{"scenario.txt", "nodes.csv", "timeseries.csv", "throughput.csv"};
  if (spec.policy == mac::RatePolicy::Minstrel) {
    write_bit_rate_csv(dir / "bit_rate.csv", stats);
    files.emplace_back("bit_rate.csv");
  }
  return files;
}

}  // namespace cascade::runner

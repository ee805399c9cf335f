#include "cascade/runner/figures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cascade/analytic/dynamics.hpp"
#include "cascade/mac/sweep.hpp"
#include "cascade/runner/csv.hpp"
#include "cascade/runner/scenario_file.hpp"

namespace cascade::runner {

namespace {

using mac::ScenarioSpec;

constexpr std::array<std::string_view, 7> kIds = {"fig5a", "fig5b", "fig13", "fig14", "ring", "rtscts", "minstrel"};

// Keys of the linear fixed-rate setup given by the reference setup; the rest
// are project defaults.
const std::set<std::string_view> kFixedRateKeys = {"topology",  "n_pairs",     "arrival_rate", "packet_size",
                                                   "bit_rate",  "policy",      "retry_limit",  "cw_max",
                                                   "slot",      "duration"};

// Divergence of the limit utilization that counts as a phase transition.
constexpr double kDivergence = 0.3;

std::string fmt(double x, int digits = 3)
{
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << x;
  return out.str();
}

class Summary {
 public:
  Summary(std::string_view id, std::string_view title) { text_ << "figure: " << id << "\n" << title << "\n\n"; }

  void parameters(const ScenarioSpec& spec, const std::set<std::string_view>& reference)
  {
    std::istringstream lines(format_scenario(spec));
    for (std::string line; std::getline(lines, line);) {
      const std::string key = line.substr(0, line.find(' '));
      // The seed comes from the command line.
      const bool ref = key != "seed" && reference.count(key) > 0;
      text_ << (ref ? "[reference-setup] " : "[project-default] ") << line << "\n";
    }
  }

  void setting(std::string_view key, const std::string& value, bool reference)
  {
    text_ << (reference ? "[reference-setup] " : "[project-default] ") << key << " = " << value << "\n";
  }

  void check(FigureOutcome& outcome, std::string name, bool passed, std::string detail)
  {
    text_ << "check " << (passed ? "PASS" : "FAIL") << ": " << name << " (" << detail << ")\n";
    outcome.checks.push_back({std::move(name), passed, std::move(detail)});
  }

  void line(const std::string& s) { text_ << s << "\n"; }

  void write(const std::filesystem::path& dir, FigureOutcome& outcome)
  {
    std::ofstream out(dir / "summary.txt", std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot write " + (dir / "summary.txt").string());
    out << text_.str();
    outcome.files.emplace_back("summary.txt");
  }

 private:
  std::ostringstream text_;
};

ScenarioSpec fixed_rate_base(const FigureOptions& o)
{
  ScenarioSpec spec;  // 41 linear pairs, 8.125 pkts/s, 2000 bytes at 1 Mb/s, R = 7
  spec.seed = o.seed;
  return spec;
}

mac::SweepOptions sweep_options(const FigureOptions& o)
{
  return {o.replications, o.threads};
}

std::string grid_text(std::span<const double> xs)
{
  std::string out;
  for (double x : xs)
    out += (out.empty() ? "" : " ") + format_number(x);
  return out;
}

// Largest increase of u_{N-1} between consecutive grid points.
struct Jump {
  std::size_t at = 0;  // between points at and at+1
  double size = 0.0;
};

Jump largest_jump(const std::vector<mac::AttackerLoadPoint>& pts)
{
  Jump j;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double d = pts[k + 1].utilization.back() - pts[k].utilization.back();
    if (d > j.size)
      j = {k, d};
  }
  return j;
}

void write_attacker_load(const std::filesystem::path& path, const std::vector<mac::AttackerLoadPoint>& pts)
{
  CsvWriter csv(path, {"rho0", "u_1", "u_20", "u_40", "u_40_min", "u_40_max"});
  for (const auto& p : pts)
    csv.row({p.rho0, p.utilization.at(1), p.utilization.at(20), p.utilization.at(40), p.utilization_min.at(40),
             p.utilization_max.at(40)});
}

double u_last_at(const std::vector<mac::AttackerLoadPoint>& pts, double rho0)
{
  for (const auto& p : pts) {
    if (std::abs(p.rho0 - rho0) < 1e-9)
      return p.utilization.back();
  }
  throw std::logic_error("rho0 not on the sweep grid");
}

// Mean of a per-window series over windows [a, b) and the given nodes.
double window_mean(const std::vector<std::vector<double>>& series, const std::vector<int>& nodes, double window,
                   double a, double b)
{
  const auto ka = static_cast<std::size_t>(std::llround(a / window));
  const auto kb = static_cast<std::size_t>(std::llround(b / window));
  double sum = 0.0;
  std::size_t n = 0;
  for (int i : nodes) {
    const auto& s = series.at(static_cast<std::size_t>(i));
    for (std::size_t k = ka; k < std::min(kb, s.size()); ++k, ++n)
      sum += s[k];
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

std::vector<int> nodes_from(int first, int count)
{
  std::vector<int> out;
  for (int i = first; i < count; ++i)
    out.push_back(i);
  return out;
}

FigureOutcome fig5a(const std::filesystem::path& dir, const FigureOptions& o)
{
  FigureOutcome out{"fig5a", {}, {}};
  Summary sum("fig5a", "utilization of A_1, A_20, A_40 against the attacker load rho0 (linear, fixed rate)");
  const auto spec = fixed_rate_base(o);
  const std::vector<double> rho0 = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  sum.parameters(spec, kFixedRateKeys);
  sum.setting("rho0", grid_text(rho0), true);
  sum.setting("replications", std::to_string(o.replications), o.replications == 5);

  const auto pts = mac::sweep_attacker_load(spec, rho0, sweep_options(o));
  write_attacker_load(dir / "attacker_load.csv", pts);
  out.files.emplace_back("attacker_load.csv");

  const auto j = largest_jump(pts);
  const double mid = 0.5 * (pts[j.at].rho0 + pts[j.at + 1].rho0);
  sum.check(out, "largest u_40 jump lies between rho0 = 0.4 and 0.6", mid >= 0.35 && mid <= 0.65,
            "jump " + fmt(j.size) + " between rho0 = " + fmt(pts[j.at].rho0, 1) + " and " + fmt(pts[j.at + 1].rho0, 1));
  sum.write(dir, out);
  return out;
}

FigureOutcome fig5b(const std::filesystem::path& dir, const FigureOptions& o)
{
  FigureOutcome out{"fig5b", {}, {}};
  Summary sum("fig5b", "utilization against node index for several attacker loads (linear, fixed rate)");
  const auto spec = fixed_rate_base(o);
  const std::vector<double> rho0 = {0.2, 0.4, 0.6, 0.8};
  sum.parameters(spec, kFixedRateKeys);
  sum.setting("rho0", grid_text(rho0), true);
  sum.setting("replications", std::to_string(o.replications), o.replications == 5);

  const auto pts = mac::sweep_attacker_load(spec, rho0, sweep_options(o));
  std::vector<std::string> header{"node_index"};
  for (double r : rho0)
    header.push_back("u_rho0_" + format_number(r));
  CsvWriter csv(dir / "utilization_profile.csv", header);
  for (int i = 0; i < spec.n_pairs; ++i) {
    std::vector<std::string> cells{std::to_string(i)};
    for (const auto& p : pts)
      cells.push_back(format_number(p.utilization[static_cast<std::size_t>(i)]));
    csv.row(cells);
  }
  out.files.emplace_back("utilization_profile.csv");

  const double low = u_last_at(pts, 0.2);
  const double high = u_last_at(pts, 0.8);
  sum.check(out, "u_40 near 0.3 at rho0 = 0.2", low >= 0.2 && low <= 0.4, "u_40 = " + fmt(low));
  sum.check(out, "u_40 congested at rho0 = 0.8", high >= 0.65 && high <= 0.85, "u_40 = " + fmt(high));
  sum.write(dir, out);
  return out;
}

FigureOutcome fig13(const std::filesystem::path& dir, const FigureOptions& o)
{
  FigureOutcome out{"fig13", {}, {}};
  Summary sum("fig13", "limit utilization u_40 with an idle and a saturated attacker against the node load rho");
  auto spec = fixed_rate_base(o);
  std::vector<double> rho;
  for (int k = 6; k <= 20; ++k)
    rho.push_back(k / 100.0);
  const std::array<int, 3> limits = {4, 7, 10};
  sum.parameters(spec, kFixedRateKeys);
  sum.setting("rho", grid_text(rho), false);
  sum.setting("retry_limits", "4 7 10", true);
  sum.setting("rho0", "0 1", true);
  sum.setting("replications", std::to_string(o.replications), false);
  sum.setting("divergence_threshold", fmt(kDivergence, 2), false);

  CsvWriter csv(dir / "node_load.csv", {"rho", "retry_limit", "u_idle", "u_saturated", "divergence", "regime"});
  for (int R : limits) {
    spec.retry_limit = R;
    const auto pts = mac::sweep_node_load(spec, rho, sweep_options(o));
    bool sim_transition = false;
    bool analytic_transition = false;
    std::string divergent;
    for (const auto& p : pts) {
      const auto regime = analytic::classify_regime(p.rho, analytic::RetryLimit(R)).regime;
      csv.row({format_number(p.rho), std::to_string(R), format_number(p.u_idle), format_number(p.u_saturated),
               format_number(p.divergence()), std::string(analytic::to_string(regime))});
      if (std::abs(p.divergence()) > kDivergence) {
        sim_transition = true;
        divergent += (divergent.empty() ? "" : " ") + fmt(p.rho, 2);
      }
      analytic_transition = analytic_transition || regime == analytic::Regime::PhaseTransition;
    }
    sum.check(out, "R = " + std::to_string(R) + ": simulated divergence agrees with classify_regime",
              sim_transition == analytic_transition,
              std::string("simulated ") + (sim_transition ? "divergent at rho = " + divergent : "no divergence") +
                  "; analytic " + (analytic_transition ? "phase transition on the grid" : "no phase transition"));
  }
  out.files.emplace_back("node_load.csv");
  sum.write(dir, out);
  return out;
}

FigureOutcome fig14(const std::filesystem::path& dir, const FigureOptions& o)
{
  FigureOutcome out{"fig14", {}, {}};
  Summary sum("fig14", "heterogeneous node loads rho_i ~ Uniform(0.11, 0.15): u_40 against rho0");
  auto spec = fixed_rate_base(o);
  spec.load_range = mac::LoadRange{0.11, 0.15};
  auto keys = kFixedRateKeys;
  keys.insert("load_range");
  keys.erase("arrival_rate");
  const std::vector<double> rho0 = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  sum.parameters(spec, keys);
  sum.setting("rho0", grid_text(rho0), false);
  sum.setting("replications", std::to_string(o.replications), false);

  const auto pts = mac::sweep_attacker_load(spec, rho0, sweep_options(o));
  write_attacker_load(dir / "attacker_load.csv", pts);
  out.files.emplace_back("attacker_load.csv");

  const auto j = largest_jump(pts);
  const double at5 = u_last_at(pts, 0.5);
  sum.check(out, "largest u_40 jump lies between rho0 = 0.5 and 0.6",
            std::abs(pts[j.at].rho0 - 0.5) < 1e-9,
            "jump " + fmt(j.size) + " between rho0 = " + fmt(pts[j.at].rho0, 1) + " and " + fmt(pts[j.at + 1].rho0, 1));
  sum.check(out, "uncongested u_40 near 0.35 at rho0 = 0.5", std::abs(at5 - 0.35) <= 0.1, "u_40 = " + fmt(at5));
  sum.write(dir, out);
  return out;
}

FigureOutcome rtscts(const std::filesystem::path& dir, const FigureOptions& o)
{
  FigureOutcome out{"rtscts", {}, {}};
  Summary sum("rtscts", "RTS/CTS enabled: remote utilization with an idle and a saturated attacker");
  auto spec = fixed_rate_base(o);
  spec.rts_cts = true;
  sum.parameters(spec, kFixedRateKeys);
  sum.setting("rho0", "0 1", false);
  sum.setting("replications", std::to_string(o.replications), false);

  std::array<std::vector<double>, 2> u;
  std::array<std::uint64_t, 2> collided{};
  for (int s = 0; s < 2; ++s) {
    const auto runs = mac::run_replications(mac::with_attacker_load(spec, s), sweep_options(o));
    u[s].assign(static_cast<std::size_t>(spec.n_pairs), 0.0);
    for (const auto& r : runs) {
      for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        u[s][i] += r.nodes[i].utilization / static_cast<double>(runs.size());
        collided[s] += r.nodes[i].collided;
      }
    }
  }
  CsvWriter csv(dir / "utilization_profile.csv", {"node_index", "u_rho0_0", "u_rho0_1"});
  for (std::size_t i = 0; i < u[0].size(); ++i)
    csv.row({static_cast<double>(i), u[0][i], u[1][i]});
  out.files.emplace_back("utilization_profile.csv");

  const double diff = std::abs(u[1].back() - u[0].back());
  sum.check(out, "remote utilization independent of the attacker", diff < 0.05,
            "|u_40(1) - u_40(0)| = " + fmt(diff, 4));
  sum.check(out, "no hidden-node collisions", collided[0] + collided[1] == 0,
            std::to_string(collided[0] + collided[1]) + " collided attempts");
  sum.write(dir, out);
  return out;
}

void write_minstrel_series(const std::filesystem::path& dir, const mac::TrafficStats& stats, FigureOutcome& out)
{
  write_throughput_csv(dir / "throughput.csv", stats);
  write_bit_rate_csv(dir / "bit_rate.csv", stats);
  out.files.emplace_back("throughput.csv");
  out.files.emplace_back("bit_rate.csv");
}

FigureOutcome ring(const std::filesystem::path& dir, const FigureOptions& o)
{
  FigureOutcome out{"ring", {}, {}};
  Summary sum("ring", "ring of Minstrel-lite pairs with a transient attacker burst");
  ScenarioSpec spec;
  spec.topology = mac::TopologyKind::Ring;
  spec.policy = mac::RatePolicy::Minstrel;
  spec.arrival_rate = 31.25;  // 0.5 Mb/s of 2000-byte packets
  spec.attacker_rate = 31.25;
  spec.burst_rate = 687.5;  // 11 Mb/s
  spec.burst_start = 300.0;
  spec.burst_end = 500.0;
  spec.warmup = 0.0;
  spec.seed = o.seed;
  sum.parameters(spec, {"topology", "n_pairs", "arrival_rate", "attacker_rate", "burst_rate", "burst_start",
                        "packet_size", "policy", "ewma", "lookaround", "rate_update_interval"});

  const auto stats = mac::run_simulation(spec);
  write_minstrel_series(dir, stats, out);

  const auto others = nodes_from(1, spec.n_pairs);
  const auto& th = stats.series.throughput_bps;
  const double w = stats.series.window;
  const double pre = window_mean(th, others, w, 100.0, 300.0);
  const double during = window_mean(th, others, w, 300.0, 500.0);
  double worst_post = 0.0;
  for (double t = 500.0; t < spec.duration; t += 50.0)
    worst_post = std::max(worst_post, window_mean(th, others, w, t, t + 50.0));
  sum.line("mean throughput of A_1..A_40: before " + fmt(pre / 1e3, 1) + " kb/s, during burst " +
           fmt(during / 1e3, 1) + " kb/s");
  sum.check(out, "throughput stays below 20% of the pre-burst mean after the burst", worst_post < 0.2 * pre,
            "highest 50 s post-burst mean = " + fmt(worst_post / std::max(pre, 1e-12), 3) + " of pre-burst");
  sum.write(dir, out);
  return out;
}

FigureOutcome minstrel(const std::filesystem::path& dir, const FigureOptions& o)
{
  FigureOutcome out{"minstrel", {}, {}};
  Summary sum("minstrel", "linear Minstrel-lite chain, attacker active over [100, 700) s");
  ScenarioSpec spec;
  spec.policy = mac::RatePolicy::Minstrel;
  spec.arrival_rate = 31.25;
  spec.attacker_rate = 0.0;
  spec.burst_rate = 312.5;
  spec.burst_start = 100.0;
  spec.burst_end = 700.0;
  spec.warmup = 0.0;
  spec.seed = o.seed;
  sum.parameters(spec, {"topology", "n_pairs", "arrival_rate", "attacker_rate", "burst_rate", "burst_start",
                        "burst_end", "packet_size", "policy", "retry_limit", "ewma", "lookaround",
                        "rate_update_interval"});

  const auto stats = mac::run_simulation(spec);
  write_minstrel_series(dir, stats, out);

  const std::vector<int> watched = {20, 40};
  const auto& th = stats.series.throughput_bps;
  const double w = stats.series.window;
  const double pre = window_mean(th, watched, w, 20.0, 100.0);
  const double attack = window_mean(th, watched, w, 200.0, 700.0);
  const double after = window_mean(th, watched, w, 800.0, 1000.0);
  const double rate = window_mean(stats.series.bit_rate, watched, w, 200.0, 700.0);
  sum.check(out, "A_20 and A_40 throughput collapses during the attack", attack < 0.2 * pre,
            fmt(attack / 1e3, 1) + " kb/s against " + fmt(pre / 1e3, 1) + " kb/s before");
  sum.check(out, "A_20 and A_40 fall back to low bit rates during the attack", rate <= 2e6,
            "mean attempt bit rate " + fmt(rate / 1e6, 2) + " Mb/s");
  sum.check(out, "A_20 and A_40 recover after the attack", after >= 0.8 * pre,
            fmt(after / 1e3, 1) + " kb/s against " + fmt(pre / 1e3, 1) + " kb/s before");
  sum.write(dir, out);
  return out;
}

}  // namespace

bool FigureOutcome::passed() const noexcept
{
  return std::all_of(checks.begin(), checks.end(), [](const FigureCheck& c) { return c.passed; });
}

std::span<const std::string_view> figure_ids() noexcept
{
  return kIds;
}

FigureOutcome reproduce_figure(std::string_view id, const std::filesystem::path& dir, const FigureOptions& options)
{
  if (id == "fig5a")
    return fig5a(dir, options);
  if (id == "fig5b")
    return fig5b(dir, options);
  if (id == "fig13")
    return fig13(dir, options);
  if (id == "fig14")
    return fig14(dir, options);
  if (id == "ring")
    return ring(dir, options);
  if (id == "rtscts")
    return rtscts(dir, options);
  if (id == "minstrel")
    return minstrel(dir, options);
  throw std::invalid_argument("unknown figure '" + std::string(id) + "'");
}

}  // namespace cascade::runner

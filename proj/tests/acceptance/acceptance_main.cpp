// Acceptance run: one PASS/FAIL line per criterion. Tolerances and runtime
// budgets are pinned below. Exit status is 0 once every criterion has been
// evaluated (a FAIL is a reported outcome, not a harness error); --strict
// turns any FAIL into status 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cascade/analytic/dynamics.hpp"
#include "cascade/mac/simulator.hpp"
#include "cascade/mac/sweep.hpp"
#include "cascade/oracle/oracles.hpp"

using namespace cascade;
using analytic::RetryLimit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

// Appends a sub-check to an outcome; the outcome passes only if all do.
class Checks {
 public:
  void add(bool ok, const std::string& what)
  {
    out_.pass = out_.pass && ok;
    if (!out_.detail.empty())
      out_.detail += "; ";
    out_.detail += (ok ? "" : "FAILED ") + what;
  }
  Outcome done() { return out_; }

 private:
  Outcome out_;
};

std::string fmt(double x, int digits = 4)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string sci(double x)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

bool within(double x, double target, double tol)
{
  return std::abs(x - target) <= tol;
}

// ---- analytic -------------------------------------------------------------

Outcome c1_fixed_points()
{
  Checks c;
  const auto a = analytic::find_fixed_points(0.15, RetryLimit(7)).points;
  const double want_a[] = {0.265, 0.777, 1.0};
  bool ok = a.size() == 3;
  for (std::size_t i = 0; ok && i < 3; ++i)
    ok = within(a[i].omega, want_a[i], 1e-3);
  c.add(ok, "(0.15,7) -> " + (a.size() == 3 ? fmt(a[0].omega) + " " + fmt(a[1].omega) + " " + fmt(a[2].omega)
                                             : std::to_string(a.size()) + " points"));
  const auto b = analytic::find_fixed_points(0.13, RetryLimit(10)).points;
  const double want_b[] = {0.2, 0.7, 1.0};
  ok = b.size() == 3;
  for (std::size_t i = 0; ok && i < 3; ++i)
    ok = within(b[i].omega, want_b[i], 5e-3);
  c.add(ok, "(0.13,10) -> " + (b.size() == 3 ? fmt(b[0].omega) + " " + fmt(b[1].omega) + " " + fmt(b[2].omega)
                                              : std::to_string(b.size()) + " points"));
  return c.done();
}

Outcome c2_maxima()
{
  Checks c;
  const auto m7 = analytic::h_max(RetryLimit(7));
  const auto m10 = analytic::h_max(RetryLimit(10));
  const auto m4 = analytic::h_max(RetryLimit(4));
  c.add(within(m7.value, 0.166, 1e-3), "h_max(7) = " + fmt(m7.value, 5));
  c.add(within(m10.value, 0.162, 2e-3), "h_max(10) = " + fmt(m10.value, 5));
  c.add(within(m4.value, 0.25, 1e-3) && within(m4.omega_star, 1.0, 1e-3),
        "h_max(4) = " + fmt(m4.value, 5) + " at " + fmt(m4.omega_star, 5));
  return c.done();
}

Outcome c3_bounds()
{
  Checks c;
  const double hinf = analytic::h_of_omega(analytic::omega_bar(), RetryLimit::unbounded());
  c.add(within(hinf, 0.161, 5e-4), "h_inf(omega_bar) = " + fmt(hinf, 5));
  std::string above_bad;
  for (int r = 7; r <= 32; ++r) {
    if (!(analytic::h_max(RetryLimit(r)).value > 1.0 / r))
      above_bad += " " + std::to_string(r);
  }
  c.add(above_bad.empty(), "h_max(R) > 1/R for R in 7..32" + (above_bad.empty() ? "" : ", violated at" + above_bad));
  std::string below_bad;
  for (int r = 1; r <= 6; ++r) {
    const double m = analytic::h_max(RetryLimit(r)).value;
    if (!(m <= 1.0 / r + 1e-12))
      below_bad += " R=" + std::to_string(r) + " (h_max " + fmt(m, 6) + " vs 1/R " + fmt(1.0 / r, 6) + ")";
  }
  c.add(below_bad.empty(), "h_max(R) <= 1/R for R in 1..6" + (below_bad.empty() ? "" : ", violated at" + below_bad));
  return c.done();
}

Outcome c4_stability()
{
  Checks c;
  const auto pts = analytic::find_fixed_points(0.13, RetryLimit(10)).points;
  const bool example = pts.size() == 3 && pts[0].stability == analytic::Stability::Stable &&
                       pts[1].stability == analytic::Stability::Unstable &&
                       pts[2].stability == analytic::Stability::Stable;
  c.add(example, "R=10 rho=0.13: Stable/Unstable/Stable");

  std::mt19937_64 rng(4);
  int found = 0;
  int bad = 0;
  while (found < 200) {
    const RetryLimit R(std::uniform_int_distribution<int>(2, 64)(rng));
    const auto b = analytic::phase_transition_bounds(R);
    if (!b.has_transition_region())
      continue;
    const double rho = std::uniform_real_distribution<double>(b.lower, b.upper)(rng);
    const auto report = analytic::classify_regime(rho, R);
    if (report.regime != analytic::Regime::PhaseTransition)
      continue;
    const auto& p = report.fixed_points.points;
    const bool ok = p.size() >= 3 && p.front().stability == analytic::Stability::Stable &&
                    p[p.size() - 2].stability == analytic::Stability::Unstable &&
                    p.back().stability == analytic::Stability::Stable;
    bad += ok ? 0 : 1;
    ++found;
  }
  c.add(bad == 0, "200 random transition cases, " + std::to_string(bad) + " mislabelled");
  return c.done();
}

Outcome c5_backoff()
{
  Checks c;
  const double v = analytic::backoff_success_probability(12e-3, 20e-6, 1023);
  const double brute = oracle::brute_force_backoff_success(12e-3, 20e-6, 1023);
  c.add(within(v, 0.059, 1e-3), "value " + fmt(v, 6));
  c.add(v == brute, "bit-identical to brute force");
  return c.done();
}

Outcome c6_oracles()
{
  constexpr int kPoints = 50;
  std::mt19937_64 rng(6);
  int misses_c = 0;
  int misses_r = 0;
  double widest = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    oracle::OracleConfig cfg;
    cfg.trials = 1'000'000;
    cfg.confidence = 0.99;
    cfg.family_size = kPoints;  // simultaneous over the 50 points of each oracle
    cfg.seed = 1000 + static_cast<std::uint64_t>(i);
    const double u = std::uniform_real_distribution<double>(0.02, 0.98)(rng);
    const auto ec = oracle::mc_collision_probability(u, 16e-3, cfg);
    misses_c += ec.brackets(analytic::collision_probability(u)) ? 0 : 1;

    const double p = std::uniform_real_distribution<double>(0.02, 0.98)(rng);
    const int R = std::uniform_int_distribution<int>(1, 32)(rng);
    cfg.seed = 2000 + static_cast<std::uint64_t>(i);
    const auto er = oracle::mc_mean_retry_count(p, R, cfg);
    misses_r += er.brackets(analytic::mean_retry_count(p, RetryLimit(R))) ? 0 : 1;
    widest = std::max(widest, ec.half_width);
  }
  Checks c;
  c.add(misses_c == 0, "collision oracle: " + std::to_string(misses_c) + "/50 outside (widest half-width " +
                           fmt(widest, 5) + ")");
  c.add(misses_r == 0, "retry-count oracle: " + std::to_string(misses_r) + "/50 outside");
  return c.done();
}

// ---- simulation -----------------------------------------------------------

constexpr int kSeeds = 5;

mac::ScenarioSpec fixed_rate_chain()
{
  mac::ScenarioSpec s;  // 41 linear pairs, rho_i = 0.13, R = 7, 1000 s
  return s;
}

std::string profile(const std::vector<mac::AttackerLoadPoint>& pts)
{
  std::string out;
  for (const auto& p : pts)
    out += (out.empty() ? "" : " ") + fmt(p.rho0, 2) + ":" + fmt(p.utilization.back(), 3);
  return out;
}

double u_last(const std::vector<mac::AttackerLoadPoint>& pts, double rho0)
{
  for (const auto& p : pts) {
    if (within(p.rho0, rho0, 1e-9))
      return p.utilization.back();
  }
  return NAN;
}

Outcome c7_phase_transition()
{
  const std::vector<double> rho0 = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const auto pts = mac::sweep_attacker_load(fixed_rate_chain(), rho0, {kSeeds, 0});
  Checks c;
  for (double r : {0.2, 0.4}) {
    const double u = u_last(pts, r);
    c.add(u >= 0.2 && u <= 0.4, "u_40(" + fmt(r, 1) + ") = " + fmt(u, 3) + " in [0.2,0.4]");
  }
  for (double r : {0.6, 0.8}) {
    const double u = u_last(pts, r);
    c.add(u >= 0.65 && u <= 0.85, "u_40(" + fmt(r, 1) + ") = " + fmt(u, 3) + " in [0.65,0.85]");
  }
  std::size_t at = 0;
  double jump = -1.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double d = pts[k + 1].utilization.back() - pts[k].utilization.back();
    if (d > jump) {
      jump = d;
      at = k;
    }
  }
  // The jump sits between two grid points; both must lie in [0.35, 0.65].
  const bool located = pts[at].rho0 >= 0.35 - 1e-9 && pts[at + 1].rho0 <= 0.65 + 1e-9;
  c.add(located, "largest jump " + fmt(jump, 3) + " between rho0 " + fmt(pts[at].rho0, 1) + " and " +
                     fmt(pts[at + 1].rho0, 1) + " (curve " + profile(pts) + ")");
  return c.done();
}

Outcome c8_region_vs_r()
{
  std::vector<double> rho;
  for (int k = 6; k <= 20; ++k)
    rho.push_back(k / 100.0);
  struct Target {
    int R;
    double lo, hi;  // expected divergent interval; NaN = none
  };
  const Target targets[] = {{7, 0.12, 0.16}, {10, 0.08, 0.14}, {4, NAN, NAN}};
  constexpr double kSlack = 0.02;
  constexpr double kDivergence = 0.3;
  Checks c;
  for (const auto& t : targets) {
    auto spec = fixed_rate_chain();
    spec.retry_limit = t.R;
    const auto pts = mac::sweep_node_load(spec, rho, {3, 0});
    std::vector<double> divergent;
    for (const auto& p : pts) {
      if (std::abs(p.divergence()) > kDivergence)
        divergent.push_back(p.rho);
    }
    std::string list;
    for (double r : divergent)
      list += (list.empty() ? "" : ",") + fmt(r, 2);
    if (std::isnan(t.lo)) {
      c.add(divergent.empty(), "R=" + std::to_string(t.R) + " divergent at {" + list + "}, expected none");
      continue;
    }
    const bool inside = std::all_of(divergent.begin(), divergent.end(), [&](double r) {
      return r >= t.lo - kSlack - 1e-9 && r <= t.hi + kSlack + 1e-9;
    });
    const bool overlaps = std::any_of(divergent.begin(), divergent.end(),
                                      [&](double r) { return r > t.lo - 1e-9 && r < t.hi + 1e-9; });
    c.add(!divergent.empty() && inside && overlaps,
          "R=" + std::to_string(t.R) + " divergent at {" + list + "}, expected within (" + fmt(t.lo, 2) + "," +
              fmt(t.hi, 2) + ") +- 0.02");
  }
  return c.done();
}

Outcome c9_heterogeneous()
{
  auto spec = fixed_rate_chain();
  spec.load_range = mac::LoadRange{0.11, 0.15};
  const std::vector<double> rho0 = {0.5, 0.6};
  const auto pts = mac::sweep_attacker_load(spec, rho0, {kSeeds, 0});
  Checks c;
  const double u5 = pts[0].utilization.back();
  const double u6 = pts[1].utilization.back();
  c.add(within(u5, 0.35, 0.1), "u_40(0.5) = " + fmt(u5, 3) + " in 0.35 +- 0.1");
  c.add(u6 >= 0.65 && u6 <= 0.85, "u_40(0.6) = " + fmt(u6, 3) + " congested in [0.65,0.85]");
  return c.done();
}

Outcome c10_rts_cts()
{
  auto spec = fixed_rate_chain();
  spec.rts_cts = true;
  double u[2] = {0.0, 0.0};
  std::uint64_t collided = 0;
  for (int s = 0; s < 2; ++s) {
    for (const auto& run : mac::run_replications(mac::with_attacker_load(spec, s), {kSeeds, 0})) {
      u[s] += run.nodes.back().utilization / kSeeds;
      for (const auto& n : run.nodes)
        collided += n.collided;
    }
  }
  Checks c;
  const double diff = std::abs(u[1] - u[0]);
  c.add(diff < 0.05, "|u_40(1) - u_40(0)| = " + fmt(diff, 4));
  c.add(collided == 0, std::to_string(collided) + " hidden-node collisions");
  return c.done();
}

Outcome c11_ring()
{
  mac::ScenarioSpec spec;
  spec.topology = mac::TopologyKind::Ring;
  spec.policy = mac::RatePolicy::Minstrel;
  spec.arrival_rate = 31.25;
  spec.attacker_rate = 31.25;
  spec.burst_rate = 687.5;
  spec.burst_start = 300.0;
  spec.burst_end = 500.0;
  spec.warmup = 0.0;
  const auto stats = mac::run_simulation(spec);
  const auto& th = stats.series.throughput_bps;
  auto mean = [&](int a, int b) {
    double sum = 0.0;
    for (std::size_t i = 1; i < th.size(); ++i) {
      for (int k = a; k < b; ++k)
        sum += th[i][static_cast<std::size_t>(k)];
    }
    return sum / static_cast<double>((th.size() - 1) * static_cast<std::size_t>(b - a));
  };
  const double pre = mean(100, 300);
  double worst = 0.0;
  for (int t = 500; t < 1000; t += 50)
    worst = std::max(worst, mean(t, t + 50));
  Checks c;
  c.add(worst < 0.2 * pre, "pre-burst " + fmt(pre / 1e3, 1) + " kb/s; highest 50 s post-burst mean " +
                               fmt(worst / 1e3, 1) + " kb/s (" + fmt(worst / pre, 3) + " of pre, limit 0.2)");
  return c.done();
}

Outcome c12_properties()
{
  Checks c;
  std::mt19937_64 rng(12);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto integer = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };

  // Monotone convergence: each sequence moves monotonically toward its limit.
  int non_monotone = 0;
  double worst_limit = 0.0;
  analytic::IterationOptions cyc;
  cyc.cycling = analytic::LoadCycling::Cycle;
  for (int k = 0; k < 300; ++k) {
    const RetryLimit R(integer(1, 32));
    const double rho = uni(0.01, 0.5);
    const double u0 = uni(0.0, 1.0);
    if (analytic::classify_regime(rho, R).regime == analytic::Regime::Boundary)
      continue;
    const double loads[] = {rho};
    const auto seq = analytic::utilization_sequence(u0, loads, R, cyc);
    const auto& v = seq.values;
    const bool up = v.back() >= v.front();
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (up ? v[i] < v[i - 1] - 1e-15 : v[i] > v[i - 1] + 1e-15) {
        ++non_monotone;
        break;
      }
    }
    worst_limit = std::max(worst_limit, std::abs(seq.limit.value_or(v.back()) - analytic::limit_of_sequence(u0, rho, R)));
  }
  c.add(non_monotone == 0, "monotone convergence (" + std::to_string(non_monotone) + " violations)");
  c.add(worst_limit <= 1e-4, "limit agreement, worst " + fmt(worst_limit, 8));

  // Derivative vs central differences, 1e-5 relative (floored at |h'| = 1e-3).
  double worst_fd = 0.0;
  for (int r : {4, 7, 10, 32}) {
    for (int k = 0; k < 1000; ++k) {
      const double w = (k + 0.5) / 1000.0;
      const double fd = (analytic::h_of_omega(w + 1e-6, RetryLimit(r)) - analytic::h_of_omega(w - 1e-6, RetryLimit(r))) / 2e-6;
      const double d = analytic::h_derivative(w, RetryLimit(r));
      worst_fd = std::max(worst_fd, std::abs(d - fd) / std::max(std::abs(d), 1e-3));
    }
  }
  c.add(worst_fd <= 1e-5, "derivative vs finite difference, worst relative " + sci(worst_fd));

  // Conservation and determinism on short simulations.
  int leaks = 0;
  bool deterministic = true;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    mac::ScenarioSpec s = mac::with_attacker_load(mac::ScenarioSpec{}, 0.7);
    s.duration = 200.0;
    s.seed = seed;
    if (seed % 2 == 0)
      s.topology = mac::TopologyKind::Ring;
    const auto a = mac::run_simulation(s);
    const auto b = mac::run_simulation(s);
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
      const auto& n = a.nodes[i];
      leaks += n.generated == n.delivered + n.dropped + n.queued ? 0 : 1;
      deterministic = deterministic && n.busy_seconds == b.nodes[i].busy_seconds &&
                      n.delivered == b.nodes[i].delivered && n.collided == b.nodes[i].collided;
    }
    deterministic = deterministic && a.events == b.events && a.series.utilization == b.series.utilization;
  }
  c.add(leaks == 0, "conservation (" + std::to_string(leaks) + " leaking nodes)");
  c.add(deterministic, "determinism");
  return c.done();
}

}  // namespace

int main(int argc, char** argv)
{
  bool strict = false;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      for (std::string item; std::getline(list, item, ',');)
        only.insert(std::stoi(item[0] == 'C' ? item.substr(1) : item));
    } else {
      std::fprintf(stderr, "usage: acceptance [--strict] [--only C1,C7,...]\n");
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "fixed points", 1.0, c1_fixed_points},
      {2, "maxima of h_R", 1.0, c2_maxima},
      {3, "bounds", 5.0, c3_bounds},
      {4, "stability", 10.0, c4_stability},
      {5, "backoff success sum", 1.0, c5_backoff},
      {6, "oracle bracketing", 120.0, c6_oracles},
      {7, "simulated phase transition", 600.0, c7_phase_transition},
      {8, "transition region vs R", 3600.0, c8_region_vs_r},
      {9, "heterogeneous loads", 600.0, c9_heterogeneous},
      {10, "RTS/CTS toggle", 300.0, c10_rts_cts},
      {11, "ring hysteresis", 600.0, c11_ring},
      {12, "property suites", 300.0, c12_properties},
  };

  int failed = 0;
  int ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && only.count(c.id) == 0)
      continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    std::printf("C%-2d %s  %s: %s [%.2f s of %.0f s%s]\n", c.id, pass ? "PASS" : "FAIL", c.title, o.detail.c_str(),
                secs, c.budget_seconds, in_time ? "" : ", over budget");
    std::fflush(stdout);
    failed += pass ? 0 : 1;
    ++ran;
  }
  std::printf("acceptance: %d/%d PASS\n", ran - failed, ran);
  return strict && failed > 0 ? 1 : 0;
}

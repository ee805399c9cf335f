// Command-line front end: analyze | sweep | simulate | validate | reproduce.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cascade/runner/commands.hpp"
#include "cascade/runner/csv.hpp"
#include "cascade/runner/figures.hpp"
#include "cascade/runner/manifest.hpp"
#include "cascade/runner/scenario_file.hpp"
#include "cascade/runner/validate.hpp"

namespace fs = std::filesystem;
using namespace cascade;

namespace {

struct Args {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> rho;
  std::vector<std::string> retry_limits;
  std::string grid;
  std::string figure;
  std::string kind = "attacker_load";
  std::uint64_t trials = 1'000'000;
  int points = 50;
  int replications = 5;
  unsigned threads = 0;
  bool inject_fault = false;
  bool json = false;
};

// "inf" or "0" selects the unbounded limit.
int parse_retry_limit(const std::string& text)
{
  if (text == "inf")
    return 0;
  const int r = std::stoi(text);
  if (r < 0)
    throw std::invalid_argument("retry limit must be >= 1 or inf");
  return r;
}

analytic::RetryLimit to_limit(int r)
{
  return r == 0 ? analytic::RetryLimit::unbounded() : analytic::RetryLimit(r);
}

mac::ScenarioSpec load_scenario(const Args& a)
{
  mac::ScenarioSpec spec = a.scenario.empty() ? mac::ScenarioSpec{} : runner::parse_scenario(a.scenario);
  if (a.seed)
    spec.seed = *a.seed;
  return spec;
}

fs::path prepare_out(const Args& a, const std::string& fallback)
{
  fs::path dir = a.out.empty() ? fs::path("runs") / fallback : fs::path(a.out);
  fs::create_directories(dir);
  return dir;
}

void finish(const fs::path& dir, const std::string& command, std::vector<std::pair<std::string, std::string>> inputs,
            std::uint64_t seed, std::vector<std::string> files)
{
  runner::RunManifest m{command, std::move(inputs), seed, {}};
  runner::write_manifest(dir, m, std::move(files));
  std::cout << "wrote " << (dir / "manifest.json").string() << "\n";
}

int cmd_analyze(const Args& a)
{
  runner::AnalyzeReport report;
  if (!a.scenario.empty()) {
    report = runner::analyze(load_scenario(a));
  } else {
    if (!a.rho || a.retry_limits.size() != 1)
      throw std::invalid_argument("analyze needs --scenario or both --rho and one --retry-limit");
    report = runner::analyze(*a.rho, to_limit(parse_retry_limit(a.retry_limits.front())));
  }
  std::cout << (a.json ? runner::to_json(report) : runner::to_text(report));
  if (report.regime.boundary_reason)
    std::cerr << "warning: boundary case, " << *report.regime.boundary_reason << "\n";
  if (!a.out.empty()) {
    const auto dir = prepare_out(a, "analyze");
    std::ofstream(dir / "report.json", std::ios::binary | std::ios::trunc) << runner::to_json(report);
    finish(dir, "analyze",
           {{"rho", runner::format_number(report.rho)}, {"scenario", a.scenario}}, a.seed.value_or(0), {"report.json"});
  }
  return 0;
}

int cmd_sweep(const Args& a)
{
  runner::SweepRequest req;
  req.kind = runner::parse_sweep_kind(a.kind);
  req.scenario = load_scenario(a);
  req.grid = a.grid.empty() ? runner::default_grid(req.kind) : runner::parse_grid(a.grid);
  for (const auto& r : a.retry_limits)
    req.retry_limits.push_back(parse_retry_limit(r));
  if (req.kind == runner::SweepKind::AttackerLoad) {
    if (req.retry_limits.size() > 1)
      throw std::invalid_argument("attacker_load takes at most one --retry-limit");
    if (!req.retry_limits.empty())
      req.scenario.retry_limit = req.retry_limits.front();
  } else if (req.retry_limits.empty()) {
    req.retry_limits = {4, 7, 10};
  }
  req.options = {a.replications, a.threads};

  const auto dir = prepare_out(a, "sweep");
  const auto files = runner::run_sweep(req, dir);
  std::string limits;
  for (int r : req.retry_limits)
    limits += (limits.empty() ? "" : " ") + (r == 0 ? std::string("inf") : std::to_string(r));
  finish(dir, "sweep",
         {{"kind", a.kind},
          {"scenario", a.scenario},
          {"grid", runner::format_number(req.grid.lo) + ":" + runner::format_number(req.grid.hi) + ":" +
                       runner::format_number(req.grid.step)},
          {"retry_limits", limits},
          {"replications", std::to_string(a.replications)}},
         req.scenario.seed, files);
  return 0;
}

int cmd_simulate(const Args& a)
{
  if (a.scenario.empty())
    throw std::invalid_argument("simulate needs --scenario");
  auto spec = load_scenario(a);
  if (a.retry_limits.size() == 1)
    spec.retry_limit = parse_retry_limit(a.retry_limits.front());
  spec.validate();
  const auto dir = prepare_out(a, "simulate");
  const auto files = runner::run_simulate(spec, dir);
  finish(dir, "simulate", {{"scenario", a.scenario}}, spec.seed, files);
  return 0;
}

int cmd_validate(const Args& a)
{
  runner::ValidateOptions opt;
  opt.trials = a.trials;
  opt.seed = a.seed.value_or(1);
  opt.points = a.points;
  opt.inject_fault = a.inject_fault;
  const auto report = runner::run_validation(opt);
  for (const auto& r : report.records) {
    if (r.status != runner::CheckStatus::Pass) {
      std::cout << runner::to_string(r.status) << "  " << r.suite << "  " << r.point << "  observed "
                << runner::format_number(r.observed) << "  expected " << runner::format_number(r.expected)
                << "  half-width " << runner::format_number(r.half_width) << "\n";
    }
  }
  std::cout << report.records.size() << " checks: " << report.count(runner::CheckStatus::Pass) << " pass, "
            << report.count(runner::CheckStatus::Fail) << " fail, " << report.count(runner::CheckStatus::Imprecise)
            << " insufficient precision\n";
  if (!a.out.empty()) {
    const auto dir = prepare_out(a, "validate");
    runner::write_validation_csv(dir / "validation.csv", report);
    finish(dir, "validate",
           {{"trials", std::to_string(a.trials)},
            {"points", std::to_string(a.points)},
            {"inject_fault", a.inject_fault ? "true" : "false"}},
           opt.seed, {"validation.csv"});
  }
  return report.passed() ? 0 : 1;
}

int cmd_reproduce(const Args& a)
{
  if (a.figure.empty())
    throw std::invalid_argument("reproduce needs --figure");
  std::vector<std::string> ids;
  if (a.figure == "all") {
    for (auto id : runner::figure_ids())
      ids.emplace_back(id);
  } else {
    ids.push_back(a.figure);
  }
  runner::FigureOptions opt{a.seed.value_or(1), a.replications, a.threads};
  for (const auto& id : ids) {
    // A single figure goes straight into --out; several get one subdirectory each.
    const fs::path base = a.out.empty() ? fs::path("runs") : fs::path(a.out);
    const fs::path target = ids.size() == 1 && !a.out.empty() ? base : base / id;
    fs::create_directories(target);
    const auto outcome = runner::reproduce_figure(id, target, opt);
    for (const auto& c : outcome.checks)
      std::cout << id << ": " << (c.passed ? "PASS" : "FAIL") << "  " << c.name << " (" << c.detail << ")\n";
    finish(target, "reproduce",
           {{"figure", id}, {"replications", std::to_string(a.replications)}}, opt.seed, outcome.files);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Cascading hidden-node congestion: analysis, simulation and reproduction datasets"};
  app.require_subcommand(1);
  Args a;

  auto add_scenario = [&](CLI::App* c) { c->add_option("--scenario", a.scenario, "scenario file")->check(CLI::ExistingFile); };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", a.out, "output directory"); };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", a.seed, "base seed"); };
  auto add_runs = [&](CLI::App* c) {
    c->add_option("--replications", a.replications, "seeds per point")->check(CLI::PositiveNumber);
    c->add_option("--threads", a.threads, "worker threads (0 = all cores)");
  };

  auto* analyze = app.add_subcommand("analyze", "fixed points, stability, regime and bounds");
  add_scenario(analyze);
  add_out(analyze);
  analyze->add_option("--rho", a.rho, "node load")->check(CLI::Range(0.0, 1.0));
  analyze->add_option("--retry-limit", a.retry_limits, "retry limit R (integer or inf)")->expected(1);
  analyze->add_flag("--json", a.json, "print the JSON report");

  auto* sweep = app.add_subcommand("sweep", "attacker_load | node_load | h_curve datasets");
  add_scenario(sweep);
  add_out(sweep);
  add_seed(sweep);
  add_runs(sweep);
  sweep->add_option("--kind", a.kind, "attacker_load, node_load or h_curve");
  sweep->add_option("--grid", a.grid, "LO:HI:STEP");
  sweep->add_option("--retry-limit", a.retry_limits, "retry limit(s); repeatable");

  auto* simulate = app.add_subcommand("simulate", "run one scenario");
  add_scenario(simulate);
  add_out(simulate);
  add_seed(simulate);
  simulate->add_option("--retry-limit", a.retry_limits, "override the scenario retry limit")->expected(1);

  auto* validate = app.add_subcommand("validate", "oracle and property cross-checks");
  add_out(validate);
  add_seed(validate);
  validate->add_option("--trials", a.trials, "Monte-Carlo trials per point")->check(CLI::Range(2.0, 1e10));
  validate->add_option("--points", a.points, "random points per oracle")->check(CLI::PositiveNumber);
  validate->add_flag("--inject-fault", a.inject_fault, "perturb the collision closed form by +0.01");

  auto* reproduce = app.add_subcommand("reproduce", "canned figure scenarios");
  add_out(reproduce);
  add_seed(reproduce);
  add_runs(reproduce);
  reproduce->add_option("--figure", a.figure, "fig5a fig5b fig13 fig14 ring rtscts minstrel, or all");

  CLI11_PARSE(app, argc, argv);
  try {
    if (analyze->parsed())
      return cmd_analyze(a);
    if (sweep->parsed())
      return cmd_sweep(a);
    if (simulate->parsed())
      return cmd_simulate(a);
    if (validate->parsed())
      return cmd_validate(a);
    return cmd_reproduce(a);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}

// d2dopt: spatial-throughput optimization and Monte Carlo verification for
// D2D links in Poisson cellular networks.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "d2dopt/commands.hpp"
#include "d2dopt/scenario.hpp"

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitBadInput = 2;

struct CommonOptions {
  std::string config;
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::size_t> grid;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_sim) {
  cmd->add_option("--config", opts.config, "Scenario file (YAML)");
  cmd->add_option("--scenario", opts.scenario, "Built-in scenario: fig1, fig3, fig4, fig5");
  if (with_sim) {
    cmd->add_option("--seed", opts.seed, "Monte Carlo seed (64-bit)");
    cmd->add_option("--trials", opts.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  }
  cmd->add_option("--grid", opts.grid, "Number of uniform p-grid points")->check(CLI::PositiveNumber);
  cmd->add_option("--out", opts.out, "Output path");
}

d2dopt::Scenario resolve(const CommonOptions& opts) {
  d2dopt::Scenario scenario;
  if (!opts.config.empty()) {
    scenario = d2dopt::load_scenario(opts.config);
  } else if (!opts.scenario.empty()) {
    scenario = d2dopt::builtin_scenario(opts.scenario);
  } else {
    scenario = d2dopt::builtin_scenario("fig1");
  }
  if (opts.seed || opts.trials) {
    auto sim = scenario.sim.value_or(d2dopt::SimConfig{});
    if (opts.seed) sim.seed = *opts.seed;
    if (opts.trials) sim.trials = *opts.trials;
    scenario.sim = sim;
  }
  if (opts.grid) {
    scenario.grid.points = *opts.grid;
    scenario.grid.values.clear();
  }
  if (!opts.out.empty()) scenario.output = opts.out;
  return scenario;
}

void emit(const d2dopt::Scenario& scenario, const std::string& text) {
  if (scenario.output.empty() || scenario.output == "-") {
    std::cout << text;
  } else {
    d2dopt::write_text_file(scenario.output, text);
  }
}

int run_analyze(const CommonOptions& opts) {
  std::cout << d2dopt::analyze_report(resolve(opts));
  return 0;
}

int run_sweep(const CommonOptions& opts) {
  const auto scenario = resolve(opts);
  emit(scenario, d2dopt::sweep_csv(scenario));
  return 0;
}

int run_simulate(const CommonOptions& opts) {
  const auto scenario = resolve(opts);
  const auto rows = d2dopt::run_simulation(scenario);
  emit(scenario, d2dopt::simulation_csv(rows));
  int failures = 0;
  for (const auto& row : rows) {
    if (!row.pass) {
      ++failures;
      std::cerr << "FAIL quantity=" << row.quantity << " z=" << d2dopt::format_number(row.z)
                << "\n";
    }
  }
  std::cerr << "SUMMARY checks=" << rows.size() << " failed=" << failures << "\n";
  return failures == 0 ? 0 : kExitChecksFailed;
}

int run_figures(const CommonOptions& opts) {
  const std::filesystem::path dir = opts.out.empty() ? "." : opts.out;
  std::filesystem::create_directories(dir);
  for (const auto& name : d2dopt::builtin_scenario_names()) {
    auto scenario = d2dopt::builtin_scenario(name);
    if (opts.grid) scenario.grid.points = *opts.grid;
    std::cout << d2dopt::analyze_report(scenario) << "\n";
    d2dopt::write_text_file((dir / (name + ".csv")).string(), d2dopt::sweep_csv(scenario));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"D2D spatial-throughput optimization for Poisson cellular networks"};
  app.require_subcommand(1);

  CommonOptions analyze_opts, sweep_opts, simulate_opts, figures_opts;
  auto* analyze = app.add_subcommand("analyze", "Closed-form constants, optimum and regime");
  add_common(analyze, analyze_opts, false);
  auto* sweep = app.add_subcommand("sweep", "CSV of D(p) over a probability grid");
  add_common(sweep, sweep_opts, false);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo checks of the closed forms (CSV)");
  add_common(simulate, simulate_opts, true);
  auto* figures = app.add_subcommand("figures", "Reports and sweep CSVs for every built-in scenario");
  figures->add_option("--grid", figures_opts.grid, "Number of uniform p-grid points")
      ->check(CLI::PositiveNumber);
  figures->add_option("--out", figures_opts.out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return run_analyze(analyze_opts);
    if (*sweep) return run_sweep(sweep_opts);
    if (*simulate) return run_simulate(simulate_opts);
    if (*figures) return run_figures(figures_opts);
  } catch (const d2dopt::ConfigError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const d2dopt::ParamError& e) {
    std::cerr << "error: params: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}

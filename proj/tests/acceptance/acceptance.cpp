// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "d2dopt/analytic.hpp"
#include "d2dopt/commands.hpp"
#include "d2dopt/montecarlo.hpp"
#include "d2dopt/optimize.hpp"
#include "d2dopt/scenario.hpp"

using namespace d2dopt;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kTrials = 100000;
constexpr std::uint64_t kSeed = 20240601;

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("AC%d %s %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string num(double v) { return format_significant(v, 10); }

double grid_best(const NetworkParams& params, int n) {
  const auto pc = propagation_constants(params);
  double best = 0;
  for (int i = 0; i < n; ++i) {
    const double p = static_cast<double>(i) / (n - 1);
    if (pc.a_b / (pc.a_b + p * pc.a_d) < params.delta) continue;
    best = std::max(best, throughput(params, p));
  }
  return best;
}

SimConfig sim_config() {
  SimConfig config;
  config.trials = kTrials;
  config.seed = kSeed;
  return config;
}

void closed_form_baseline() {
  PropagationConstants<double> pc{1.0, 0.0, {}};
  const double value = coverage_downlink_closed(pc, 1.0, 4.0);
  const double err = std::abs(value - 2 / kPi);
  report(1, err < 1e-12, "downlink closed form beta=4 tau=1 a_d=0: " + num(value) + " err=" + num(err));
}

void integral_equivalence() {
  double worst = 0;
  int cases = 0;
  for (const double beta : {2.5, 3.0, 4.0, 5.0, 6.0}) {
    for (const double tau : {1.0, 2.0, 5.0, 20.0, 100.0}) {
      for (const double ratio : {0.0, 0.5, 1.0, 2.0, 10.0}) {
        const double a_b = 1.3;
        PropagationConstants<double> pc{a_b, ratio * a_b, {}};
        const auto laplace = [&](double xi) { return laplace_device_interference(xi, pc.a_d, beta); };
        const double integral = coverage_downlink_integral(pc, tau, beta, laplace);
        const double closed = coverage_downlink_closed(pc, tau, beta);
        worst = std::max(worst, std::abs(integral - closed));
        ++cases;
      }
    }
  }
  report(2, worst < 1e-8, std::to_string(cases) + " cases, max |integral - closed| = " + num(worst));
}

void figure_optima() {
  const auto fig1 = builtin_scenario("fig1").params;
  const auto fig3 = builtin_scenario("fig3").params;
  const auto r1 = solve(fig1);
  const auto r3 = solve(fig3);
  const bool ok1 = std::abs(r1.p_star - 8 / (kPi * kPi)) <= 1e-9 && r1.regime == Regime::Unconstrained &&
                   r1.throughput_at_opt >= grid_best(fig1, 10000) - 1e-12;
  const bool ok3 = std::abs(r3.p_star - 1.0 / 9.0) <= 1e-12 && r3.regime == Regime::Constrained &&
                   r3.throughput_at_opt >= grid_best(fig3, 10000) - 1e-12;
  report(3, ok1 && ok3,
         "fig1 p*=" + num(r1.p_star) + " " + to_string(r1.regime) + "; fig3 p*=" + num(r3.p_star) +
             " " + to_string(r3.regime));
}

NetworkParams random_params(std::mt19937_64& rng) {
  const auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  const auto log_uniform = [&](double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  };
  NetworkParams p;
  p.lambda_b = log_uniform(0.1, 10);
  p.lambda_d = log_uniform(0.1, 50);
  p.power_b = log_uniform(1, 100);
  p.power_d = log_uniform(0.1, 10);
  p.beta = uniform(2.2, 6);
  p.kappa = log_uniform(0.5, 2);
  p.moment_b = rayleigh_moment(p.beta);
  p.moment_d = rayleigh_moment(p.beta);
  p.tau_d = log_uniform(0.1, 10);
  p.delta = uniform(0.05, 0.99);
  p.r_mode = uniform(0, 1) < 0.5 ? LinkDistanceMode::IntraCell : LinkDistanceMode::ExtraCell;
  return p;
}

void grid_optimality() {
  std::mt19937_64 rng(4242);
  double worst_gap = -1e300;
  int violations = 0;
  for (int i = 0; i < 50; ++i) {
    const auto params = random_params(rng);
    const double gap = grid_best(params, 10000) - solve(params).throughput_at_opt;
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-12) ++violations;
  }
  report(4, violations == 0,
         "50 random sets, max(grid best - D(p*)) = " + num(worst_gap) + ", violations=" +
             std::to_string(violations));
}

void monte_carlo_oracle() {
  const auto params = builtin_scenario("fig1").params;
  const auto config = sim_config();
  const auto pc = propagation_constants(params);
  struct Check {
    const char* name;
    CoverageEstimate estimate;
    double expected;
  };
  const double d2d_expected =
      coverage_d2d(pc, link_distance(params), params.tau_d, params.beta, params.kappa);
  const std::vector<Check> checks{
      {"downlink p=0", estimate_downlink_coverage(config, params, 0.0, 1.0), 2 / kPi},
      {"downlink p=1", estimate_downlink_coverage(config, params, 1.0, 1.0), 1 / kPi},
      {"d2d p=1", estimate_d2d_coverage(config, params, 1.0, link_distance(params), params.tau_d),
       d2d_expected},
  };
  // At most one miss per 20 checks.
  const int allowed = static_cast<int>(checks.size()) / 20;
  int misses = 0;
  std::string detail;
  for (const auto& check : checks) {
    const double z = z_score(check.estimate, check.expected);
    if (std::abs(z) > 3) ++misses;
    detail += std::string(check.name) + ": " + num(check.estimate.mean) + " vs " +
              num(check.expected) + " z=" + format_significant(z, 3) + "; ";
  }
  report(5, misses <= allowed, detail + "misses=" + std::to_string(misses));
}

void propagation_invariance() {
  const auto params = builtin_scenario("fig1").params;
  const auto config = sim_config();
  const auto reference = FadingModel::exponential();
  const double moment = reference.analytic_moment(params.beta);
  const auto lognormal = propagation_invariance_check(
      config, params, reference, FadingModel::lognormal_matched(1.0, moment, params.beta), 0.0, 1.0);
  const auto constant = propagation_invariance_check(
      config, params, reference, FadingModel::constant_matched(moment, params.beta), 0.0, 1.0);
  const bool pass = std::abs(lognormal.z) < 3 && std::abs(constant.z) < 3;
  report(6, pass,
         "exponential " + num(lognormal.first.mean) + ", lognormal " + num(lognormal.second.mean) +
             " z=" + format_significant(lognormal.z, 3) + ", constant " + num(constant.second.mean) +
             " z=" + format_significant(constant.z, 3));
}

void degradation_constancy() {
  const auto params = builtin_scenario("fig1").params;
  const auto pc = propagation_constants(params);
  double worst = 0;
  for (const double p : {0.1, 0.5, 0.8105694691387022, 1.0}) {
    const auto active = thinned_constants(pc, p);
    const auto silent = thinned_constants(pc, 0.0);
    const double expected = pc.a_b / (pc.a_b + p * pc.a_d);
    for (const double tau : {1.0, 2.0, 10.0, 100.0}) {
      const double ratio = coverage_downlink_closed(active, tau, params.beta) /
                           coverage_downlink_closed(silent, tau, params.beta);
      worst = std::max(worst, std::abs(ratio - expected));
    }
  }
  report(7, worst <= 1e-14, "max |ratio - a_b/(a_b + p a_d)| = " + num(worst));
}

void delta_star_boundary() {
  auto params = builtin_scenario("fig1").params;
  const auto base = solve(params);
  params.delta = base.delta_star - 1e-6;
  const auto below = solve(params).regime;
  params.delta = base.delta_star + 1e-6;
  const auto above = solve(params).regime;
  report(8, base.p1_star < 1 && below == Regime::Unconstrained && above == Regime::Constrained,
         "delta*=" + num(base.delta_star) + ": below -> " + to_string(below) + ", above -> " +
             to_string(above));
}

void scaling_forms() {
  // Intra-cell D(1) = c1 lambda_d exp(-d1 lambda_b / lambda_d): linear in
  // log(D / lambda_d) against lambda_b / lambda_d.
  auto params = builtin_scenario("fig1").params;
  std::vector<double> densities;
  for (int i = 1; i <= 40; ++i) densities.push_back(0.5 * i);
  const auto n = static_cast<Eigen::Index>(densities.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd target(n);
  Eigen::VectorXd values(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    params.lambda_d = densities[static_cast<std::size_t>(i)];
    values(i) = throughput(params, 1.0);
    design(i, 0) = 1.0;
    design(i, 1) = -params.lambda_b / params.lambda_d;
    target(i) = std::log(values(i) / params.lambda_d);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(target);
  double worst_residual = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double fitted =
        std::exp(coef(0)) * densities[static_cast<std::size_t>(i)] * std::exp(coef(1) * design(i, 1));
    worst_residual = std::max(worst_residual, std::abs(fitted / values(i) - 1));
  }

  const auto extra = builtin_scenario("fig4").params;
  auto constrained = extra;
  constrained.delta = 0.95;
  const auto rows = scaling_curves(constrained, densities);
  bool all_constrained = true;
  double spread = 0;
  for (const auto& row : rows) {
    all_constrained &= row.regime == Regime::Constrained;
    spread = std::max(spread, std::abs(row.throughput - rows.front().throughput));
  }
  report(9, worst_residual < 1e-10 && all_constrained && spread <= 1e-12,
         "intra-cell fit c1=" + num(std::exp(coef(0))) + " d1=" + num(coef(1)) +
             " max rel residual=" + num(worst_residual) + "; extra-cell constrained spread=" +
             num(spread));
}

void determinism() {
  auto scenario = builtin_scenario("fig1");
  scenario.sim->trials = 10000;
  scenario.sim->seed = kSeed;
  const auto first = simulation_csv(run_simulation(scenario));
  const auto second = simulation_csv(run_simulation(scenario));
  report(10, !first.empty() && first == second,
         "two simulate runs, " + std::to_string(first.size()) + " bytes, identical=" +
             (first == second ? "yes" : "no"));
}

}  // namespace

int main() {
  closed_form_baseline();
  integral_equivalence();
  figure_optima();
  grid_optimality();
  monte_carlo_oracle();
  propagation_invariance();
  degradation_constancy();
  delta_star_boundary();
  scaling_forms();
  determinism();
  std::printf("SUMMARY %d/10 passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}

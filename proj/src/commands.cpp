#include "d2dopt/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "d2dopt/analytic.hpp"
#include "d2dopt/optimize.hpp"

namespace d2dopt {

namespace {

void require_moment(const FadingModel& model, double expected, double beta, const char* which) {
  const double moment = model.analytic_moment(beta);
  if (std::abs(moment - expected) > 1e-9 * std::max(moment, expected)) {
    throw std::invalid_argument(std::string(which) + " " + model.describe() + " has 2/beta-moment " +
                                format_significant(moment, 10) + " but the params specify " +
                                format_significant(expected, 10));
  }
}

}  // namespace

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

std::string format_significant(double value, int digits) {
  if (!std::isfinite(value)) return format_number(value);
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, digits);
  return std::string(buffer, result.ptr);
}

std::string analyze_report(const Scenario& scenario) {
  const auto& params = scenario.params;
  const auto pc = propagation_constants(params);
  const auto opt = solve(params);

  std::ostringstream out;
  out << "scenario: " << scenario.name << "\n"
      << "r_mode: " << to_string(params.r_mode) << "\n"
      << "r: " << format_significant(link_distance(params)) << "\n"
      << "a_b: " << format_significant(pc.a_b) << "\n"
      << "a_d: " << format_significant(pc.a_d) << "\n"
      << "p1_star: " << format_significant(opt.p1_star) << "\n"
      << "p2_star: " << format_significant(opt.p2_star) << "\n"
      << "p_star: " << format_significant(opt.p_star) << "\n"
      << "regime: " << to_string(opt.regime) << "\n"
      << "throughput: " << format_significant(opt.throughput_at_opt) << "\n"
      << "delta_star: " << format_significant(opt.delta_star) << "\n";
  return out.str();
}

std::string sweep_csv(const Scenario& scenario) {
  std::ostringstream out;
  if (!scenario.lambda_d_grid.empty()) {
    out << "lambda_d,regime,p_star,D_p_star\n";
    for (const auto& row : scaling_curves(scenario.params, scenario.lambda_d_grid)) {
      out << format_number(row.lambda_d) << ',' << to_string(row.regime) << ','
          << format_number(row.p_star) << ',' << format_number(row.throughput) << '\n';
    }
    return out.str();
  }
  const auto grid = scenario.grid.resolve();
  out << "p,D_analytic,coverage_d2d,degradation_ratio,constraint_ok\n";
  for (const auto& row : sweep(scenario.params, grid)) {
    out << format_number(row.p) << ',' << format_number(row.throughput) << ','
        << format_number(row.coverage_d2d) << ',' << format_number(row.degradation_ratio) << ','
        << (row.constraint_ok ? 1 : 0) << '\n';
  }
  return out.str();
}

std::vector<SimulationRow> run_simulation(const Scenario& scenario) {
  if (!scenario.sim) throw std::invalid_argument("scenario '" + scenario.name + "' has no sim section");
  const auto& sim = *scenario.sim;
  const auto& params = scenario.params;
  validate(params);
  require_moment(sim.base_fading, params.moment_b, params.beta, "base-station fading");
  require_moment(sim.device_fading, params.moment_d, params.beta, "device fading");

  auto pc = propagation_constants(params);
  for (const auto& tier : sim.extra_tiers) {
    pc.a_extra.push_back(tier_constant(tier.density, tier.power,
                                       tier.fading.analytic_moment(params.beta), params.kappa,
                                       params.beta));
  }
  const auto opt = solve(params);
  const double r = link_distance(params);
  const double tau_b = params.tau_b_min;

  const auto compare = [](std::string quantity, double analytic, const CoverageEstimate& estimate) {
    SimulationRow row{std::move(quantity), analytic, estimate, z_score(estimate, analytic), true};
    row.pass = std::abs(row.z) <= kZThreshold;
    return row;
  };

  std::vector<SimulationRow> rows;
  const auto downlink_p0 = estimate_downlink_coverage(sim, params, 0.0, tau_b);
  const double closed_p0 = coverage_downlink_closed(thinned_constants(pc, 0.0), tau_b, params.beta);
  rows.push_back(compare("downlink_p0", closed_p0, downlink_p0));

  rows.push_back(compare(
      "downlink_pstar",
      coverage_downlink_closed(thinned_constants(pc, opt.p_star), tau_b, params.beta),
      estimate_downlink_coverage(sim, params, opt.p_star, tau_b)));

  if (std::isfinite(r)) {
    rows.push_back(compare("d2d_pstar",
                           coverage_d2d(thinned_constants(pc, opt.p_star), r, params.tau_d,
                                        params.beta, params.kappa),
                           estimate_d2d_coverage(sim, params, opt.p_star, r, params.tau_d)));
  }

  // Same seed as downlink_p0, base-station fading swapped for a lognormal
  // with the same 2/beta-moment.
  SimConfig lognormal = sim;
  lognormal.base_fading = FadingModel::lognormal_matched(1.0, params.moment_b, params.beta);
  const auto shadowed = estimate_downlink_coverage(lognormal, params, 0.0, tau_b);
  SimulationRow invariance{"invariance_lognormal", closed_p0, shadowed,
                           z_score(downlink_p0, shadowed), true};
  invariance.pass = std::abs(invariance.z) <= kZThreshold;
  rows.push_back(invariance);
  return rows;
}

std::string simulation_csv(const std::vector<SimulationRow>& rows) {
  std::ostringstream out;
  out << "quantity,analytic,mc_mean,mc_stderr,z\n";
  for (const auto& row : rows) {
    out << row.quantity << ',' << format_number(row.analytic) << ','
        << format_number(row.estimate.mean) << ',' << format_number(row.estimate.std_error) << ','
        << format_number(row.z) << '\n';
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace d2dopt

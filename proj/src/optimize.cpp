#include "d2dopt/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace d2dopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::Saturated:
      return "saturated";
    case Regime::Unconstrained:
      return "unconstrained";
    case Regime::Constrained:
      return "constrained";
  }
  return "saturated";
}

double link_exponent(const NetworkParams& params) {
  const double r = link_distance(params);
  if (r == 0) return 0;
  const double kr = params.kappa * r;
  return kr * kr * interference_gamma(params.beta) * std::pow(params.tau_d, 2.0 / params.beta);
}

double throughput(const NetworkParams& params, double p) {
  if (!(p >= 0 && p <= 1)) throw std::domain_error("throughput: p must lie in [0, 1]");
  if (p == 0 || params.lambda_d == 0) return 0;
  const auto pc = thinned_constants(propagation_constants(params), p);
  return p * params.lambda_d *
         coverage_d2d(pc, link_distance(params), params.tau_d, params.beta, params.kappa);
}

double p1_star(const NetworkParams& params) {
  const auto pc = propagation_constants(params);
  const double c = link_exponent(params);
  if (pc.a_d == 0) throw std::domain_error("p1_star: a_d = 0, throughput is increasing in p");
  if (c == 0) throw std::domain_error("p1_star: r = 0, throughput is increasing in p");
  return 1.0 / (pc.a_d * c);
}

double p2_star(const NetworkParams& params) {
  const auto pc = propagation_constants(params);
  if (pc.a_d == 0) throw std::domain_error("p2_star: a_d = 0, the constraint never binds");
  return pc.a_b / pc.a_d * (1.0 / params.delta - 1.0);
}

double delta_star(const NetworkParams& params) {
  const auto pc = propagation_constants(params);
  return 1.0 - 1.0 / (1.0 + pc.a_b * link_exponent(params));
}

double throughput_saturated(const NetworkParams& params) {
  const auto pc = propagation_constants(params);
  if (params.lambda_d == 0) return 0;
  return params.lambda_d * std::exp(-(pc.a_b + pc.a_d) * link_exponent(params));
}

double throughput_at_p1(const NetworkParams& params) {
  const auto pc = propagation_constants(params);
  const double c = link_exponent(params);
  return params.lambda_d * std::exp(-pc.a_b * c - 1.0) / (pc.a_d * c);
}

double throughput_at_p2(const NetworkParams& params) {
  const auto pc = propagation_constants(params);
  return p2_star(params) * params.lambda_d *
         std::exp(-pc.a_b * link_exponent(params) / params.delta);
}

OptimizationResult solve(const NetworkParams& params) {
  validate(params);
  const auto pc = propagation_constants(params);
  const double c = link_exponent(params);

  OptimizationResult result;
  result.delta_star = delta_star(params);

  if (pc.a_d == 0 || c == 0) {
    result.p1_star = kInf;
    result.p2_star = kInf;
    result.p_star = 1;
    result.regime = Regime::Saturated;
    result.throughput_at_opt = throughput_saturated(params);
    return result;
  }

  result.p1_star = 1.0 / (pc.a_d * c);
  result.p2_star = pc.a_b / pc.a_d * (1.0 / params.delta - 1.0);
  result.p_star = std::min({1.0, result.p1_star, result.p2_star});
  if (result.p_star == 1.0) {
    result.regime = Regime::Saturated;
    result.throughput_at_opt = throughput_saturated(params);
  } else if (result.p_star == result.p1_star) {
    result.regime = Regime::Unconstrained;
    result.throughput_at_opt = throughput_at_p1(params);
  } else {
    result.regime = Regime::Constrained;
    result.throughput_at_opt = throughput_at_p2(params);
  }
  return result;
}

std::vector<double> uniform_grid(std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {0.0};
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return grid;
}

std::vector<SweepRow> sweep(const NetworkParams& params, std::span<const double> p_grid) {
  validate(params);
  if (!std::is_sorted(p_grid.begin(), p_grid.end())) {
    throw std::invalid_argument("sweep: grid must be sorted");
  }
  const auto pc = propagation_constants(params);
  const double r = link_distance(params);

  std::vector<SweepRow> rows;
  rows.reserve(p_grid.size());
  for (const double p : p_grid) {
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("sweep: grid values must lie in [0, 1]");
    SweepRow row;
    row.p = p;
    row.throughput = throughput(params, p);
    row.coverage_d2d =
        coverage_d2d(thinned_constants(pc, p), r, params.tau_d, params.beta, params.kappa);
    row.degradation_ratio = pc.a_b / (pc.a_b + p * pc.a_d);
    row.constraint_ok = row.degradation_ratio >= params.delta;
    rows.push_back(row);
  }
  return rows;
}

std::vector<ScalingRow> scaling_curves(const NetworkParams& params,
                                       std::span<const double> lambda_d_grid) {
  std::vector<ScalingRow> rows;
  rows.reserve(lambda_d_grid.size());
  for (const double lambda_d : lambda_d_grid) {
    if (!(lambda_d > 0)) throw std::invalid_argument("scaling_curves: densities must be positive");
    NetworkParams scaled = params;
    scaled.lambda_d = lambda_d;
    const auto opt = solve(scaled);
    rows.push_back({lambda_d, opt.regime, opt.p_star, opt.throughput_at_opt});
  }
  return rows;
}

}  // namespace d2dopt

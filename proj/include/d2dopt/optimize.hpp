#ifndef D2DOPT_OPTIMIZE_HPP
#define D2DOPT_OPTIMIZE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "d2dopt/analytic.hpp"
#include "d2dopt/params.hpp"

namespace d2dopt {

/// Which argument of min(1, p1*, p2*) is attained. Ties resolve in
/// declaration order.
enum class Regime { Saturated, Unconstrained, Constrained };

const char* to_string(Regime regime);

struct OptimizationResult {
  double p1_star = 0;  // unconstrained stationary point; +inf when D(p) is increasing
  double p2_star = 0;  // constraint-binding value; may exceed 1, +inf when a_d = 0
  double p_star = 0;
  Regime regime = Regime::Saturated;
  double throughput_at_opt = 0;
  double delta_star = 0;
};

struct SweepRow {
  double p = 0;
  double throughput = 0;
  double coverage_d2d = 0;
  double degradation_ratio = 1;
  bool constraint_ok = true;
};

struct ScalingRow {
  double lambda_d = 0;
  Regime regime = Regime::Saturated;
  double p_star = 0;
  double throughput = 0;
};

/// (kappa r)^2 Gamma(1 - 2/beta) tau_d^{2/beta}: D2D coverage is
/// exp(-(a_b + p a_d) * link_exponent).
double link_exponent(const NetworkParams& params);

/// Device spatial throughput D(p) = p lambda_d P(SIR_D2D(p) > tau_d).
double throughput(const NetworkParams& params, double p);

/// Stationary point of D(p). Throws std::domain_error when a_d = 0 or r = 0.
double p1_star(const NetworkParams& params);

/// (a_b / a_d)(1/delta - 1). Throws std::domain_error when a_d = 0.
double p2_star(const NetworkParams& params);

/// Largest delta for which the unconstrained optimum stays feasible.
double delta_star(const NetworkParams& params);

// Closed-form throughput at the three candidate optima.
double throughput_saturated(const NetworkParams& params);
double throughput_at_p1(const NetworkParams& params);
double throughput_at_p2(const NetworkParams& params);

OptimizationResult solve(const NetworkParams& params);

/// n uniformly spaced points on [0, 1], endpoints included.
std::vector<double> uniform_grid(std::size_t n = 201);

/// One row per grid point. The grid must be sorted and inside [0, 1].
std::vector<SweepRow> sweep(const NetworkParams& params, std::span<const double> p_grid);

/// Re-solves with lambda_d replaced by each grid value.
std::vector<ScalingRow> scaling_curves(const NetworkParams& params,
                                       std::span<const double> lambda_d_grid);

}  // namespace d2dopt

#endif  // D2DOPT_OPTIMIZE_HPP

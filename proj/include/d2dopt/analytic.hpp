#ifndef D2DOPT_ANALYTIC_HPP
#define D2DOPT_ANALYTIC_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2dopt/params.hpp"
#include "d2dopt/quadrature.hpp"

namespace d2dopt {

/// Per-tier propagation constants. a_b and a_d fully determine how the base
/// stations and the (active) devices enter every coverage formula; a_extra
/// holds further interfering tiers sharing the same path-loss law.
template <typename Scalar = double>
struct PropagationConstants {
  Scalar a_b{};
  Scalar a_d{};
  std::vector<Scalar> a_extra;

  /// a_b + a_d + sum(a_extra), summed left to right.
  Scalar total() const {
    Scalar sum = a_b + a_d;
    for (const Scalar a : a_extra) sum += a;
    return sum;
  }

  bool operator==(const PropagationConstants&) const = default;
};

template <typename Scalar>
Scalar gamma_fn(Scalar x) {
  if (!(x > 0)) throw std::domain_error("gamma_fn: argument must be positive");
  return std::tgamma(x);
}

namespace detail {

template <typename Scalar>
void require_beta(Scalar beta) {
  if (!(beta > Scalar(kMinBeta))) {
    throw std::domain_error("path-loss exponent beta must exceed 2");
  }
}

template <typename Scalar>
void require_constants(const PropagationConstants<Scalar>& pc) {
  if (!(pc.a_b > 0)) throw std::domain_error("propagation constant a_b must be positive");
  if (!(pc.a_d >= 0)) throw std::domain_error("propagation constant a_d must be non-negative");
  for (const Scalar a : pc.a_extra) {
    if (!(a >= 0)) throw std::domain_error("extra-tier propagation constant must be non-negative");
  }
}

}  // namespace detail

/// Gamma(1 - 2/beta), the factor that multiplies every Laplace exponent.
template <typename Scalar>
Scalar interference_gamma(Scalar beta) {
  detail::require_beta(beta);
  return gamma_fn(Scalar(1) - Scalar(2) / beta);
}

/// (kappa |x|)^beta
template <typename Scalar>
Scalar path_loss(Scalar distance, Scalar kappa, Scalar beta) {
  if (!(distance >= 0)) throw std::domain_error("path_loss: distance must be non-negative");
  return std::pow(kappa * distance, beta);
}

template <typename Scalar = double>
Scalar path_loss(Scalar distance, const NetworkParams& params) {
  return path_loss(distance, Scalar(params.kappa), Scalar(params.beta));
}

/// lambda * pi * E(F^{2/beta}) * P^{2/beta} / kappa^2 for a single tier.
template <typename Scalar = double>
Scalar tier_constant(Scalar density, Scalar power, Scalar moment, Scalar kappa, Scalar beta) {
  return density * std::numbers::pi_v<Scalar> * moment * std::pow(power, Scalar(2) / beta) /
         (kappa * kappa);
}

/// Constants for all devices active; thinning is applied separately.
template <typename Scalar = double>
PropagationConstants<Scalar> propagation_constants(const NetworkParams& params) {
  validate(params);
  const auto beta = Scalar(params.beta);
  const auto kappa = Scalar(params.kappa);
  return {tier_constant(Scalar(params.lambda_b), Scalar(params.power_b), Scalar(params.moment_b),
                        kappa, beta),
          tier_constant(Scalar(params.lambda_d), Scalar(params.power_d), Scalar(params.moment_d),
                        kappa, beta),
          {}};
}

/// Aloha thinning: only a fraction p of devices transmit.
template <typename Scalar>
PropagationConstants<Scalar> thinned_constants(PropagationConstants<Scalar> pc, Scalar p) {
  if (!(p >= 0 && p <= 1)) throw std::domain_error("thinned_constants: p must lie in [0, 1]");
  pc.a_d *= p;
  return pc;
}

/// Laplace transform of the total device interference at xi.
template <typename Scalar>
Scalar laplace_device_interference(Scalar xi, Scalar a_d, Scalar beta) {
  if (!(xi >= 0)) throw std::domain_error("laplace_device_interference: xi must be non-negative");
  if (xi == 0 || a_d == 0) return Scalar(1);
  return std::exp(-a_d * interference_gamma(beta) * std::pow(xi, Scalar(2) / beta));
}

/// Downlink coverage for tau_b >= 1 in closed form:
///   tau_b^{-2/beta} / (Gamma(1+2/beta) Gamma(1-2/beta)) * a_b / (a_b + a_d + sum a_extra)
template <typename Scalar>
Scalar coverage_downlink_closed(const PropagationConstants<Scalar>& pc, Scalar tau_b,
                                Scalar beta) {
  detail::require_beta(beta);
  detail::require_constants(pc);
  if (!(tau_b >= 1)) {
    throw std::domain_error("coverage_downlink_closed: tau_b must be at least 1");
  }
  const Scalar s = Scalar(2) / beta;
  const Scalar base = std::pow(tau_b, -s) / (gamma_fn(Scalar(1) + s) * gamma_fn(Scalar(1) - s));
  return base * (pc.a_b / pc.total());
}

/// Number of geometric levels in the initial partition of the integral form.
inline constexpr int kIntegralLevels = 40;

/// Default quadrature tolerances for the integral form.
template <typename Scalar>
struct IntegralOptions {
  Scalar abs_tol = Scalar(1e-13);
  Scalar rel_tol = Scalar(1e-12);
  Scalar tail_cutoff = Scalar(1e-14);
  std::size_t max_intervals = 2000;
};

/// Downlink coverage for tau_b >= 1 from the integral representation with an
/// arbitrary device-interference Laplace transform. With t = u^2,
///
///   tau_b^{-2/beta} / Gamma(1+2/beta) * int_0^T exp(-t Gamma(1-2/beta)) L((t/a_b)^{beta/2}) dt
///
/// truncated where exp(-T Gamma(1-2/beta)) hits tail_cutoff; L <= 1 bounds the
/// integrand by the Gaussian-type factor. Throws QuadratureError on failure.
template <typename Scalar, typename Laplace>
Scalar coverage_downlink_integral(const PropagationConstants<Scalar>& pc, Scalar tau_b,
                                  Scalar beta, const Laplace& laplace_id,
                                  const IntegralOptions<Scalar>& options = {}) {
  detail::require_beta(beta);
  detail::require_constants(pc);
  if (!(tau_b >= 1)) {
    throw std::domain_error("coverage_downlink_integral: tau_b must be at least 1");
  }
  const Scalar s = Scalar(2) / beta;
  const Scalar g = interference_gamma(beta);
  const Scalar upper = -std::log(options.tail_cutoff) / g;
  const Scalar a_b = pc.a_b;
  const Scalar half_beta = beta / 2;

  const auto integrand = [&](Scalar t) -> Scalar {
    const Scalar xi = std::pow(t / a_b, half_beta);
    return std::exp(-t * g) * static_cast<Scalar>(laplace_id(xi));
  };
  // Geometric partition toward 0: the integrand may decay on a scale far
  // below upper when a_d >> a_b, which a single initial panel would miss.
  std::vector<Scalar> breakpoints(kIntegralLevels + 2);
  breakpoints.front() = Scalar(0);
  for (int k = 0; k <= kIntegralLevels; ++k) {
    breakpoints[static_cast<std::size_t>(k + 1)] = std::ldexp(upper, k - kIntegralLevels);
  }
  const auto result = integrate_adaptive<Scalar>(integrand, std::span<const Scalar>(breakpoints),
                                                 options.abs_tol, options.rel_tol,
                                                 options.max_intervals);
  if (!result.converged) {
    throw QuadratureError(static_cast<double>(result.value), static_cast<double>(result.abs_error));
  }
  return std::pow(tau_b, -s) / gamma_fn(Scalar(1) + s) * result.value;
}

/// D2D coverage at link distance r:
///   exp(-(a_b + a_d + sum a_extra) (kappa r)^2 Gamma(1-2/beta) tau_d^{2/beta})
/// kappa scales every received power alike, so it enters only through the
/// path loss of the link itself.
template <typename Scalar>
Scalar coverage_d2d(const PropagationConstants<Scalar>& pc, Scalar r, Scalar tau_d, Scalar beta,
                    Scalar kappa) {
  detail::require_beta(beta);
  if (!(r >= 0)) throw std::domain_error("coverage_d2d: r must be non-negative");
  if (!(tau_d > 0)) throw std::domain_error("coverage_d2d: tau_d must be positive");
  const Scalar a = pc.total();
  if (r == 0 || a == 0) return Scalar(1);
  const Scalar kr = kappa * r;
  return std::exp(-a * kr * kr * interference_gamma(beta) * std::pow(tau_d, Scalar(2) / beta));
}

}  // namespace d2dopt

#endif  // D2DOPT_ANALYTIC_HPP

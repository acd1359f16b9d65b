#ifndef D2DOPT_MONTECARLO_HPP
#define D2DOPT_MONTECARLO_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "d2dopt/params.hpp"

namespace d2dopt {

/// Distribution of a positive propagation variable (fading, shadowing).
class FadingModel {
 public:
  enum class Kind { Exponential, Lognormal, Constant };

  static FadingModel exponential(double mean = 1.0);
  /// exp(mu + sigma Z) with Z standard normal.
  static FadingModel lognormal(double mu, double sigma);
  /// Lognormal with log-scale sigma whose 2/beta-moment equals target_moment.
  static FadingModel lognormal_matched(double sigma, double target_moment, double beta);
  static FadingModel constant(double value);
  /// Constant whose 2/beta-moment equals target_moment.
  static FadingModel constant_matched(double target_moment, double beta);

  Kind kind() const noexcept { return kind_; }
  double first() const noexcept { return first_; }
  double second() const noexcept { return second_; }

  /// E(X^{2/beta}) in closed form.
  double analytic_moment(double beta) const;

  template <typename Rng>
  double sample(Rng& rng) const {
    switch (kind_) {
      case Kind::Exponential:
        return std::exponential_distribution<double>(1.0 / first_)(rng);
      case Kind::Lognormal:
        return std::exp(first_ + second_ * std::normal_distribution<double>(0.0, 1.0)(rng));
      case Kind::Constant:
        return first_;
    }
    return first_;
  }

  std::string describe() const;

  bool operator==(const FadingModel&) const = default;

 private:
  FadingModel(Kind kind, double first, double second) : kind_(kind), first_(first), second_(second) {}

  Kind kind_ = Kind::Exponential;
  double first_ = 1.0;   // mean | mu | value
  double second_ = 0.0;  // sigma for lognormal
};

/// Interference-only tier (density, power, fading) sharing the path-loss law.
struct TierConfig {
  double density = 0;
  double power = 1;
  FadingModel fading = FadingModel::exponential();

  bool operator==(const TierConfig&) const = default;
};

/// How the active devices are generated from the device density.
enum class ThinningMethod {
  Density,  // PPP of density p * lambda_d
  Marking   // PPP of density lambda_d, each point kept with probability p
};

struct SimConfig {
  /// Radius of the sampling disk around the receiver; 0 selects
  /// default_window_radius.
  double window_radius = 0;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 42;
  FadingModel base_fading = FadingModel::exponential();
  FadingModel device_fading = FadingModel::exponential();
  std::vector<TierConfig> extra_tiers;
  ThinningMethod thinning = ThinningMethod::Density;
  /// Worker threads; 0 uses std::thread::hardware_concurrency().
  unsigned threads = 0;

  bool operator==(const SimConfig&) const = default;
};

struct CoverageEstimate {
  double mean = 0;
  double std_error = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
};

/// Bernoulli estimate from a success count.
CoverageEstimate make_estimate(std::uint64_t successes, std::uint64_t trials);

/// (a - b) / sqrt(se_a^2 + se_b^2); 0 when both estimates coincide exactly.
double z_score(const CoverageEstimate& a, const CoverageEstimate& b);

/// One-sample z against an exact value.
double z_score(const CoverageEstimate& estimate, double expected);

/// Expected number of in-window points below which the default window is
/// never shrunk further, and the ceiling used for small beta.
inline constexpr double kMinWindowPoints = 100.0;
inline constexpr double kMaxWindowPoints = 20000.0;
/// Target fraction of far-field interference left outside the window.
inline constexpr double kWindowTailFraction = 1e-3;

/// Window radius R with (R / R_ref)^{2 - beta} <= kWindowTailFraction, where
/// R_ref = 1/sqrt(pi * total density) is the one-point radius. The expected
/// point count is clamped to [kMinWindowPoints, kMaxWindowPoints].
double default_window_radius(double total_density, double beta);

/// Homogeneous PPP on the disk of the given radius about the origin, one
/// point per column.
template <typename Scalar = double, typename Rng>
Eigen::Matrix<Scalar, 2, Eigen::Dynamic> sample_ppp(Scalar density, Scalar radius, Rng& rng) {
  using Points = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;
  if (!(density >= 0)) throw std::domain_error("sample_ppp: density must be non-negative");
  if (!(radius > 0)) throw std::domain_error("sample_ppp: radius must be positive");
  if (density == 0) return Points(2, 0);

  const double mean_count =
      static_cast<double>(density * std::numbers::pi_v<Scalar> * radius * radius);
  std::poisson_distribution<long long> count(mean_count);
  std::uniform_real_distribution<Scalar> unit(Scalar(0), Scalar(1));
  const auto n = static_cast<Eigen::Index>(count(rng));
  Points points(2, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar rho = radius * std::sqrt(unit(rng));
    const Scalar theta = 2 * std::numbers::pi_v<Scalar> * unit(rng);
    points(0, i) = rho * std::cos(theta);
    points(1, i) = rho * std::sin(theta);
  }
  return points;
}

/// Downlink coverage: a non-transmitting device at the origin connects to the
/// base station with the largest SIR; success when that SIR exceeds tau_b.
/// Interference comes from the other base stations, the active devices and
/// any extra tiers. Valid for every tau_b > 0.
CoverageEstimate estimate_downlink_coverage(const SimConfig& config, const NetworkParams& params,
                                            double p, double tau_b);

/// Mean number of base stations whose SIR exceeds tau_b. For tau_b >= 1 at
/// most one station can qualify, so this equals the max-SIR estimate.
double estimate_downlink_indicator_sum(const SimConfig& config, const NetworkParams& params,
                                       double p, double tau_b);

/// D2D coverage in the bi-polar model: receiver at the origin, its
/// transmitter at distance r with Rayleigh fading, interference from base
/// stations, the other active devices and any extra tiers.
CoverageEstimate estimate_d2d_coverage(const SimConfig& config, const NetworkParams& params,
                                       double p, double r, double tau_d);

struct InvarianceReport {
  CoverageEstimate first;
  CoverageEstimate second;
  double z = 0;
};

/// Downlink coverage under two base-station fading laws with equal
/// 2/beta-moments, sharing the seed. Throws std::invalid_argument when the
/// moments differ.
InvarianceReport propagation_invariance_check(const SimConfig& config, const NetworkParams& params,
                                              const FadingModel& fading_a,
                                              const FadingModel& fading_b, double p, double tau_b);

}  // namespace d2dopt

#endif  // D2DOPT_MONTECARLO_HPP

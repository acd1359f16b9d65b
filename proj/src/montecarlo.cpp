#include "d2dopt/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace d2dopt {

namespace {

constexpr double kPi = std::numbers::pi;

// splitmix64 finalizer, used only to derive well-separated substream seeds.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  return mix64(mix64(mix64(seed) ^ trial) ^ (stream * 0xD1B54A32D192ED03ULL));
}

enum Stream : std::uint64_t { kBaseStream = 0, kDeviceStream = 1, kLinkStream = 2, kExtraStream = 3 };

// Random source for one tier within one trial.
class TierStream {
 public:
  explicit TierStream(std::uint64_t seed) : rng_(seed) {}

  double unit_exponential() { return exp_(rng_); }
  double uniform() { return uniform_(rng_); }

  double fading(const FadingModel& model) { return model.sample(rng_); }

 private:
  std::mt19937_64 rng_;
  std::exponential_distribution<double> exp_{1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Received power (kappa^2 r^2)^{-beta/2}, with a multiply-only path for beta = 4.
class PathGain {
 public:
  PathGain(double kappa, double beta) : kappa2_(kappa * kappa), half_beta_(beta / 2) {}

  double operator()(double r2) const {
    const double x = kappa2_ * r2;
    if (half_beta_ == 2.0) return 1.0 / (x * x);
    return std::pow(x, -half_beta_);
  }

 private:
  double kappa2_;
  double half_beta_;
};

struct Tier {
  double density = 0;
  double power = 1;
  FadingModel fading = FadingModel::exponential();
  double keep_probability = 1;  // Bernoulli marking; 1 means no marking
  std::uint64_t stream = 0;
};

// Visits every point of a tier inside the window in increasing distance.
// Squared distances are the arrival times of a rate density*pi Poisson
// process, so a larger window extends the same realization.
template <typename Visit>
void for_each_signal(const Tier& tier, double window_r2, const PathGain& gain, std::uint64_t seed,
                     std::uint64_t trial, Visit&& visit) {
  if (tier.density <= 0) return;
  TierStream stream(substream_seed(seed, trial, tier.stream));
  const double rate = tier.density * kPi;
  double r2 = 0;
  while (true) {
    r2 += stream.unit_exponential() / rate;
    if (r2 > window_r2) break;
    const double fade = stream.fading(tier.fading);
    if (tier.keep_probability < 1 && !(stream.uniform() < tier.keep_probability)) continue;
    visit(tier.power * fade * gain(r2));
  }
}

// Tiers seen by a receiver at the origin: base stations, active devices and
// extras, each with its own substream id.
struct Layout {
  Tier base;
  Tier devices;
  std::vector<Tier> extras;
  double window_r2 = 0;
};

Layout make_layout(const SimConfig& config, const NetworkParams& params, double p) {
  validate(params);
  if (!(p >= 0 && p <= 1)) throw std::domain_error("p must lie in [0, 1]");
  if (config.trials == 0) throw std::invalid_argument("SimConfig: trials must be at least 1");

  Layout layout;
  layout.base = {params.lambda_b, params.power_b, config.base_fading, 1.0, kBaseStream};
  if (config.thinning == ThinningMethod::Density) {
    layout.devices = {p * params.lambda_d, params.power_d, config.device_fading, 1.0, kDeviceStream};
  } else {
    layout.devices = {params.lambda_d, params.power_d, config.device_fading, p, kDeviceStream};
    if (p == 0) layout.devices.density = 0;
  }
  double total_density = params.lambda_b + p * params.lambda_d;
  for (std::size_t k = 0; k < config.extra_tiers.size(); ++k) {
    const auto& extra = config.extra_tiers[k];
    if (!(extra.density >= 0) || !(extra.power > 0)) {
      throw std::invalid_argument("SimConfig: extra tier needs density >= 0 and power > 0");
    }
    layout.extras.push_back({extra.density, extra.power, extra.fading, 1.0, kExtraStream + k});
    total_density += extra.density;
  }
  const double radius = config.window_radius > 0
                            ? config.window_radius
                            : default_window_radius(total_density, params.beta);
  layout.window_r2 = radius * radius;
  return layout;
}

// Runs trial_fn(trial) -> bool over all trials, split into contiguous blocks
// per worker. Counts are integers, so the total does not depend on threading.
template <typename TrialFn>
std::uint64_t count_successes(const SimConfig& config, TrialFn&& trial_fn) {
  unsigned workers = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(
      std::clamp<std::uint64_t>(workers == 0 ? 1 : workers, 1, config.trials));

  if (workers == 1) {
    std::uint64_t successes = 0;
    for (std::uint64_t t = 0; t < config.trials; ++t) successes += trial_fn(t) ? 1 : 0;
    return successes;
  }

  std::vector<std::uint64_t> partial(workers, 0);
  {
    std::vector<std::jthread> pool;
    const std::uint64_t block = (config.trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::uint64_t begin = w * block;
        const std::uint64_t end = std::min(config.trials, begin + block);
        std::uint64_t local = 0;
        for (std::uint64_t t = begin; t < end; ++t) local += trial_fn(t) ? 1 : 0;
        partial[w] = local;
      });
    }
  }
  std::uint64_t successes = 0;
  for (const auto c : partial) successes += c;
  return successes;
}

double interference(const Layout& layout, const Tier& tier, const PathGain& gain,
                    std::uint64_t seed, std::uint64_t trial) {
  double sum = 0;
  for_each_signal(tier, layout.window_r2, gain, seed, trial, [&](double s) { sum += s; });
  return sum;
}

double non_base_interference(const Layout& layout, const PathGain& gain, std::uint64_t seed,
                             std::uint64_t trial) {
  double sum = interference(layout, layout.devices, gain, seed, trial);
  for (const auto& extra : layout.extras) sum += interference(layout, extra, gain, seed, trial);
  return sum;
}

}  // namespace

FadingModel FadingModel::exponential(double mean) {
  if (!(mean > 0)) throw std::invalid_argument("exponential fading needs a positive mean");
  return {Kind::Exponential, mean, 0.0};
}

FadingModel FadingModel::lognormal(double mu, double sigma) {
  if (!std::isfinite(mu) || !(sigma >= 0)) {
    throw std::invalid_argument("lognormal fading needs finite mu and sigma >= 0");
  }
  return {Kind::Lognormal, mu, sigma};
}

FadingModel FadingModel::lognormal_matched(double sigma, double target_moment, double beta) {
  if (!(target_moment > 0)) throw std::invalid_argument("target moment must be positive");
  // E X^s = exp(s mu + s^2 sigma^2 / 2) with s = 2/beta.
  const double s = 2.0 / beta;
  return lognormal((std::log(target_moment) - s * s * sigma * sigma / 2) / s, sigma);
}

FadingModel FadingModel::constant(double value) {
  if (!(value > 0)) throw std::invalid_argument("constant fading needs a positive value");
  return {Kind::Constant, value, 0.0};
}

FadingModel FadingModel::constant_matched(double target_moment, double beta) {
  if (!(target_moment > 0)) throw std::invalid_argument("target moment must be positive");
  return constant(std::pow(target_moment, beta / 2));
}

double FadingModel::analytic_moment(double beta) const {
  const double s = 2.0 / beta;
  switch (kind_) {
    case Kind::Exponential:
      return std::pow(first_, s) * std::tgamma(1.0 + s);
    case Kind::Lognormal:
      return std::exp(s * first_ + s * s * second_ * second_ / 2);
    case Kind::Constant:
      return std::pow(first_, s);
  }
  return 0;
}

std::string FadingModel::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Exponential:
      out << "exponential(mean=" << first_ << ")";
      break;
    case Kind::Lognormal:
      out << "lognormal(mu=" << first_ << ", sigma=" << second_ << ")";
      break;
    case Kind::Constant:
      out << "constant(" << first_ << ")";
      break;
  }
  return out.str();
}

CoverageEstimate make_estimate(std::uint64_t successes, std::uint64_t trials) {
  CoverageEstimate e;
  e.trials = trials;
  e.successes = successes;
  if (trials == 0) return e;
  e.mean = static_cast<double>(successes) / static_cast<double>(trials);
  e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(trials));
  return e;
}

double z_score(const CoverageEstimate& a, const CoverageEstimate& b) {
  const double diff = a.mean - b.mean;
  const double se = std::hypot(a.std_error, b.std_error);
  if (diff == 0) return 0;
  if (se == 0) return diff > 0 ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
  return diff / se;
}

double z_score(const CoverageEstimate& estimate, double expected) {
  CoverageEstimate exact;
  exact.mean = expected;
  return z_score(estimate, exact);
}

double default_window_radius(double total_density, double beta) {
  if (!(total_density > 0)) throw std::invalid_argument("window radius needs a positive density");
  if (!(beta > kMinBeta)) throw std::invalid_argument("window radius needs beta > 2");
  const double ratio = std::pow(kWindowTailFraction, 1.0 / (2.0 - beta));
  const double points = std::clamp(ratio * ratio, kMinWindowPoints, kMaxWindowPoints);
  return std::sqrt(points / (kPi * total_density));
}

CoverageEstimate estimate_downlink_coverage(const SimConfig& config, const NetworkParams& params,
                                            double p, double tau_b) {
  if (!(tau_b > 0)) throw std::domain_error("estimate_downlink_coverage: tau_b must be positive");
  const Layout layout = make_layout(config, params, p);
  const PathGain gain(params.kappa, params.beta);

  const auto successes = count_successes(config, [&](std::uint64_t trial) {
    double total = 0;
    double strongest = -1;
    for_each_signal(layout.base, layout.window_r2, gain, config.seed, trial, [&](double s) {
      total += s;
      strongest = std::max(strongest, s);
    });
    if (strongest < 0) return false;
    const double others = (total - strongest) + non_base_interference(layout, gain, config.seed, trial);
    return strongest > tau_b * others;
  });
  return make_estimate(successes, config.trials);
}

double estimate_downlink_indicator_sum(const SimConfig& config, const NetworkParams& params,
                                       double p, double tau_b) {
  if (!(tau_b > 0)) throw std::domain_error("estimate_downlink_indicator_sum: tau_b must be positive");
  const Layout layout = make_layout(config, params, p);
  const PathGain gain(params.kappa, params.beta);

  // Single-threaded: the count per trial is not a Bernoulli variable.
  std::vector<double> signals;
  std::uint64_t covered = 0;
  for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
    signals.clear();
    double total = 0;
    for_each_signal(layout.base, layout.window_r2, gain, config.seed, trial, [&](double s) {
      total += s;
      signals.push_back(s);
    });
    if (signals.empty()) continue;
    const double rest = non_base_interference(layout, gain, config.seed, trial);
    for (const double s : signals) {
      if (s > tau_b * ((total - s) + rest)) ++covered;
    }
  }
  return static_cast<double>(covered) / static_cast<double>(config.trials);
}

CoverageEstimate estimate_d2d_coverage(const SimConfig& config, const NetworkParams& params,
                                       double p, double r, double tau_d) {
  if (!(r >= 0)) throw std::domain_error("estimate_d2d_coverage: r must be non-negative");
  if (!(tau_d > 0)) throw std::domain_error("estimate_d2d_coverage: tau_d must be positive");
  const Layout layout = make_layout(config, params, p);
  if (r == 0) return make_estimate(config.trials, config.trials);
  const PathGain gain(params.kappa, params.beta);
  const double link_gain = params.power_d * gain(r * r);

  const auto successes = count_successes(config, [&](std::uint64_t trial) {
    TierStream link(substream_seed(config.seed, trial, kLinkStream));
    const double signal = link_gain * link.fading(config.device_fading);
    const double total = interference(layout, layout.base, gain, config.seed, trial) +
                         non_base_interference(layout, gain, config.seed, trial);
    return signal > tau_d * total;
  });
  return make_estimate(successes, config.trials);
}

InvarianceReport propagation_invariance_check(const SimConfig& config, const NetworkParams& params,
                                              const FadingModel& fading_a,
                                              const FadingModel& fading_b, double p, double tau_b) {
  const double m_a = fading_a.analytic_moment(params.beta);
  const double m_b = fading_b.analytic_moment(params.beta);
  if (std::abs(m_a - m_b) > 1e-9 * std::max(m_a, m_b)) {
    throw std::invalid_argument("propagation_invariance_check: fading models " + fading_a.describe() +
                                " and " + fading_b.describe() + " have different 2/beta-moments");
  }
  SimConfig first = config;
  first.base_fading = fading_a;
  SimConfig second = config;
  second.base_fading = fading_b;

  InvarianceReport report;
  report.first = estimate_downlink_coverage(first, params, p, tau_b);
  report.second = estimate_downlink_coverage(second, params, p, tau_b);
  report.z = z_score(report.first, report.second);
  return report;
}

}  // namespace d2dopt

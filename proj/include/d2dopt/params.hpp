#ifndef D2DOPT_PARAMS_HPP
#define D2DOPT_PARAMS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace d2dopt {

/// Rule that fixes the device-to-device link distance r.
enum class LinkDistanceMode {
  IntraCell,  // r = 1/(2 sqrt(lambda_d)), mean device spacing
  ExtraCell,  // r = 1/(2 sqrt(lambda_b)), mean base-station spacing
  Explicit    // r taken from NetworkParams::r_explicit
};

/// Full description of a two-tier Poisson cellular network with D2D links.
///
/// Every threshold and power is on a linear scale. Fading moments are the
/// 2/beta-moments of the base-station and device propagation variables.
struct NetworkParams {
  double lambda_b = 1.0;
  double lambda_d = 5.0;
  double power_b = 1.0;
  double power_d = 1.0;
  double beta = 4.0;
  double kappa = 1.0;
  double moment_b = 0.0;
  double moment_d = 0.0;
  double tau_d = 1.0;
  double tau_b_min = 1.0;
  double delta = 0.5;
  LinkDistanceMode r_mode = LinkDistanceMode::IntraCell;
  double r_explicit = 0.0;

  bool operator==(const NetworkParams&) const = default;
};

/// Smallest admissible path-loss exponent. Gamma(1 - 2/beta) blows up at 2.
inline constexpr double kMinBeta = 2.0 + 1e-6;

struct FieldIssue {
  std::string field;
  std::string message;
};

/// Thrown when a NetworkParams (or anything built from one) breaks an
/// invariant. Carries one entry per offending field.
class ParamError : public std::invalid_argument {
 public:
  explicit ParamError(std::vector<FieldIssue> issues);

  const std::vector<FieldIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<FieldIssue> issues_;
};

/// Collects every invariant violation; empty means valid.
std::vector<FieldIssue> check_params(const NetworkParams& params);

/// Throws ParamError listing every violated invariant.
void validate(const NetworkParams& params);

/// D2D link distance implied by the params' r_mode. Infinite for intra-cell
/// links with an empty device process.
double link_distance(const NetworkParams& params);

/// Unit-mean exponential (Rayleigh power) 2/beta-moment, Gamma(1 + 2/beta).
double rayleigh_moment(double beta);

/// Params with moments left at zero get the Rayleigh moment filled in.
NetworkParams with_default_moments(NetworkParams params);

const char* to_string(LinkDistanceMode mode);
LinkDistanceMode link_distance_mode_from_string(const std::string& name);

}  // namespace d2dopt

#endif  // D2DOPT_PARAMS_HPP

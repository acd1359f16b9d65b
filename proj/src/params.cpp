#include "d2dopt/params.hpp"

#include <cmath>
#include <limits>

namespace d2dopt {

namespace {

std::string join_issues(const std::vector<FieldIssue>& issues) {
  std::string text = "invalid network parameters:";
  for (const auto& issue : issues) {
    text += " [" + issue.field + "] " + issue.message + ";";
  }
  return text;
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

ParamError::ParamError(std::vector<FieldIssue> issues)
    : std::invalid_argument(join_issues(issues)), issues_(std::move(issues)) {}

std::vector<FieldIssue> check_params(const NetworkParams& params) {
  std::vector<FieldIssue> issues;
  const auto require = [&](bool ok, const char* field, const char* message) {
    if (!ok) issues.push_back({field, message});
  };
  require(finite(params.lambda_b) && params.lambda_b > 0, "lambda_b", "must be positive and finite");
  require(finite(params.lambda_d) && params.lambda_d >= 0, "lambda_d",
          "must be non-negative and finite");
  require(finite(params.power_b) && params.power_b > 0, "power_b", "must be positive and finite");
  require(finite(params.power_d) && params.power_d > 0, "power_d", "must be positive and finite");
  require(finite(params.beta) && params.beta > kMinBeta, "beta", "must exceed 2");
  require(finite(params.kappa) && params.kappa > 0, "kappa", "must be positive and finite");
  require(finite(params.moment_b) && params.moment_b > 0, "moment_b", "must be positive and finite");
  require(finite(params.moment_d) && params.moment_d > 0, "moment_d", "must be positive and finite");
  require(finite(params.tau_d) && params.tau_d > 0, "tau_d", "must be positive and finite");
  require(params.tau_b_min == 1.0, "tau_b_min",
          "only the coverage domain tau_b >= 1 is supported (tau_b_min = 1)");
  require(params.delta > 0 && params.delta <= 1, "delta", "must lie in (0, 1]");
  if (params.r_mode == LinkDistanceMode::Explicit) {
    require(finite(params.r_explicit) && params.r_explicit >= 0, "r",
            "explicit link distance must be non-negative and finite");
  }
  return issues;
}

void validate(const NetworkParams& params) {
  auto issues = check_params(params);
  if (!issues.empty()) throw ParamError(std::move(issues));
}

double link_distance(const NetworkParams& params) {
  switch (params.r_mode) {
    case LinkDistanceMode::IntraCell:
      if (params.lambda_d == 0) return std::numeric_limits<double>::infinity();
      return 1.0 / (2.0 * std::sqrt(params.lambda_d));
    case LinkDistanceMode::ExtraCell:
      return 1.0 / (2.0 * std::sqrt(params.lambda_b));
    case LinkDistanceMode::Explicit:
      return params.r_explicit;
  }
  return params.r_explicit;
}

double rayleigh_moment(double beta) { return std::tgamma(1.0 + 2.0 / beta); }

NetworkParams with_default_moments(NetworkParams params) {
  if (params.moment_b == 0) params.moment_b = rayleigh_moment(params.beta);
  if (params.moment_d == 0) params.moment_d = rayleigh_moment(params.beta);
  return params;
}

const char* to_string(LinkDistanceMode mode) {
  switch (mode) {
    case LinkDistanceMode::IntraCell:
      return "intra-cell";
    case LinkDistanceMode::ExtraCell:
      return "extra-cell";
    case LinkDistanceMode::Explicit:
      return "explicit";
  }
  return "explicit";
}

LinkDistanceMode link_distance_mode_from_string(const std::string& name) {
  if (name == "intra-cell") return LinkDistanceMode::IntraCell;
  if (name == "extra-cell") return LinkDistanceMode::ExtraCell;
  if (name == "explicit") return LinkDistanceMode::Explicit;
  throw std::invalid_argument("unknown r_mode '" + name +
                              "' (expected intra-cell, extra-cell or explicit)");
}

}  // namespace d2dopt

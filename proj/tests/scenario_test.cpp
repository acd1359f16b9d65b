#include "d2dopt/scenario.hpp"

#include <cmath>

#include <gtest/gtest.h>

using namespace d2dopt;

namespace {

ConfigError expect_config_error(const std::string& text) {
  try {
    parse_scenario(text, "test.yaml");
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return ConfigError("test.yaml", 0, 0, "none");
}

}  // namespace

TEST(Builtin, FigureParameters) {
  const auto fig1 = builtin_scenario("fig1");
  EXPECT_EQ(fig1.params.lambda_b, 1.0);
  EXPECT_EQ(fig1.params.lambda_d, 5.0);
  EXPECT_EQ(fig1.params.power_b, 25.0);
  EXPECT_EQ(fig1.params.power_d, 1.0);
  EXPECT_EQ(fig1.params.beta, 4.0);
  EXPECT_EQ(fig1.params.delta, 0.45);
  EXPECT_DOUBLE_EQ(fig1.params.moment_b, std::sqrt(M_PI) / 2);
  EXPECT_EQ(fig1.params.r_mode, LinkDistanceMode::IntraCell);
  ASSERT_TRUE(fig1.sim.has_value());
  EXPECT_EQ(fig1.sim->trials, 100000u);

  EXPECT_EQ(builtin_scenario("fig3").params.delta, 0.9);
  EXPECT_EQ(builtin_scenario("fig4").params.r_mode, LinkDistanceMode::ExtraCell);
  const auto fig5 = builtin_scenario("fig5");
  ASSERT_EQ(fig5.lambda_d_grid.size(), 40u);
  EXPECT_EQ(fig5.lambda_d_grid.front(), 0.5);
  EXPECT_EQ(fig5.lambda_d_grid.back(), 20.0);

  EXPECT_THROW(builtin_scenario("fig2"), std::invalid_argument);
}

TEST(Serialize, RoundTripsEveryBuiltin) {
  for (const auto& name : builtin_scenario_names()) {
    const auto scenario = builtin_scenario(name);
    EXPECT_EQ(parse_scenario(serialize_scenario(scenario)), scenario) << name;
  }
}

TEST(Serialize, RoundTripsCustomSimulation) {
  auto scenario = builtin_scenario("fig4");
  scenario.params.kappa = 1.7;
  scenario.params.r_mode = LinkDistanceMode::Explicit;
  scenario.params.r_explicit = 0.123456789;
  scenario.sim->base_fading = FadingModel::lognormal(-0.3, 1.1);
  scenario.sim->device_fading = FadingModel::constant(2.5);
  scenario.sim->extra_tiers.push_back({0.5, 3.0, FadingModel::exponential(2.0)});
  scenario.sim->thinning = ThinningMethod::Marking;
  scenario.sim->seed = 18446744073709551615ull;
  scenario.grid.values = {0.0, 0.1, 1.0 / 3.0};
  scenario.output = "out.csv";
  EXPECT_EQ(parse_scenario(serialize_scenario(scenario)), scenario);
}

TEST(Parse, BaseWithOverrides) {
  const auto s = parse_scenario(
      "base: fig1\n"
      "name: denser\n"
      "params:\n"
      "  lambda_d: 12\n"
      "sweep:\n"
      "  points: 11\n");
  EXPECT_EQ(s.name, "denser");
  EXPECT_EQ(s.params.lambda_d, 12.0);
  EXPECT_EQ(s.params.power_b, 25.0);
  EXPECT_EQ(s.grid.resolve().size(), 11u);
}

TEST(Parse, DecibelThresholds) {
  const auto s = parse_scenario(
      "base: fig1\n"
      "params:\n"
      "  tau_d_db: 10\n"
      "  tau_b_min_db: 0\n");
  EXPECT_NEAR(s.params.tau_d, 10.0, 1e-12);
  EXPECT_EQ(s.params.tau_b_min, 1.0);
}

TEST(Parse, LinearAndDecibelTogetherRejected) {
  const auto e = expect_config_error(
      "base: fig1\n"
      "params:\n"
      "  tau_d: 2\n"
      "  tau_d_db: 3\n");
  EXPECT_NE(std::string(e.what()).find("tau_d"), std::string::npos);
}

TEST(Parse, UnknownKeyReportsLine) {
  const auto e = expect_config_error(
      "base: fig1\n"
      "params:\n"
      "  lambda_b: 1\n"
      "  lamda_d: 4\n");
  EXPECT_EQ(e.line(), 4);
  EXPECT_NE(std::string(e.what()).find("lamda_d"), std::string::npos);
  EXPECT_EQ(std::string(e.what()).rfind("test.yaml:4:", 0), 0u);
}

TEST(Parse, InvalidBetaReportsLine) {
  const auto e = expect_config_error(
      "name: bad\n"
      "params:\n"
      "  lambda_b: 1\n"
      "  beta: 2\n");
  EXPECT_EQ(e.line(), 4);
  EXPECT_NE(std::string(e.what()).find("beta"), std::string::npos);
}

TEST(Parse, SyntaxErrorReportsLine) {
  const auto e = expect_config_error(
      "name: x\n"
      "params:\n"
      "  lambda_b: [1, 2\n");
  EXPECT_GT(e.line(), 0);
}

TEST(Parse, NonNumericValue) {
  const auto e = expect_config_error(
      "base: fig1\n"
      "params:\n"
      "  delta: high\n");
  EXPECT_EQ(e.line(), 3);
}

TEST(Parse, BetaOverrideRecomputesMoments) {
  const auto s = parse_scenario(
      "base: fig1\n"
      "params:\n"
      "  beta: 3\n");
  EXPECT_NEAR(s.params.moment_b, std::tgamma(1 + 2.0 / 3.0), 1e-15);
  EXPECT_NEAR(s.params.moment_d, std::tgamma(1 + 2.0 / 3.0), 1e-15);

  const auto explicit_moment = parse_scenario(
      "base: fig1\n"
      "params:\n"
      "  beta: 3\n"
      "  moment_b: 0.8\n");
  EXPECT_EQ(explicit_moment.params.moment_b, 0.8);
}

TEST(Parse, ExplicitDistance) {
  const auto s = parse_scenario(
      "base: fig1\n"
      "params:\n"
      "  r: 0.25\n");
  EXPECT_EQ(s.params.r_mode, LinkDistanceMode::Explicit);
  EXPECT_EQ(s.params.r_explicit, 0.25);

  const auto extra = parse_scenario(
      "base: fig1\n"
      "params:\n"
      "  r_mode: extra-cell\n");
  EXPECT_EQ(extra.params.r_mode, LinkDistanceMode::ExtraCell);
}

TEST(Parse, MatchedFading) {
  const auto s = parse_scenario(
      "base: fig1\n"
      "sim:\n"
      "  trials: 500\n"
      "  base_fading: {kind: lognormal, sigma: 1}\n"
      "  device_fading: {kind: constant}\n");
  ASSERT_TRUE(s.sim.has_value());
  EXPECT_EQ(s.sim->trials, 500u);
  EXPECT_EQ(s.sim->base_fading.kind(), FadingModel::Kind::Lognormal);
  EXPECT_NEAR(s.sim->base_fading.analytic_moment(4.0), s.params.moment_b, 1e-14);
  EXPECT_EQ(s.sim->device_fading.kind(), FadingModel::Kind::Constant);
  EXPECT_NEAR(s.sim->device_fading.analytic_moment(4.0), s.params.moment_d, 1e-14);
}

TEST(Parse, UnknownFadingKind) {
  const auto e = expect_config_error(
      "base: fig1\n"
      "sim:\n"
      "  base_fading: {kind: rician}\n");
  EXPECT_EQ(e.line(), 3);
}

TEST(Parse, RejectsNonUnitDownlinkThreshold) {
  const auto e = expect_config_error(
      "base: fig1\n"
      "params:\n"
      "  tau_b_min: 2\n");
  EXPECT_EQ(e.line(), 3);
  EXPECT_NE(std::string(e.what()).find("tau_b_min"), std::string::npos);
}

TEST(Parse, WithoutBaseNeedsCompleteParams) {
  const auto s = parse_scenario(
      "params:\n"
      "  lambda_b: 2\n"
      "  lambda_d: 3\n"
      "  power_b: 10\n"
      "  power_d: 1\n"
      "  beta: 3.5\n"
      "  tau_d: 1\n"
      "  delta: 0.5\n");
  EXPECT_EQ(s.name, "custom");
  EXPECT_NEAR(s.params.moment_b, std::tgamma(1 + 2 / 3.5), 1e-15);
  EXPECT_FALSE(s.sim.has_value());
}

TEST(Load, MissingFile) {
  EXPECT_THROW(load_scenario("/nonexistent/scenario.yaml"), ConfigError);
}

TEST(GridSpec, ExplicitValuesWin) {
  GridSpec grid;
  grid.points = 5;
  EXPECT_EQ(grid.resolve(), (std::vector<double>{0, 0.25, 0.5, 0.75, 1}));
  grid.values = {0.1, 0.2};
  EXPECT_EQ(grid.resolve(), (std::vector<double>{0.1, 0.2}));
}

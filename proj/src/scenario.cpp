#include "d2dopt/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "d2dopt/optimize.hpp"

namespace d2dopt {

namespace {

std::string shortest(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

std::string format_location(const std::string& source, int line, int column) {
  std::string text = source;
  if (line > 0) text += ":" + std::to_string(line);
  if (column > 0) text += ":" + std::to_string(column);
  return text;
}

// Reads one YAML document into a Scenario, reporting errors against the
// source name with the offending node's position.
class ScenarioReader {
 public:
  explicit ScenarioReader(std::string source) : source_(std::move(source)) {}

  Scenario read(const YAML::Node& root) {
    if (!root.IsMap()) fail(root, "top level must be a mapping");
    allow_keys(root, {"name", "base", "params", "sim", "sweep", "output"});

    Scenario scenario;
    if (const auto base = root["base"]) {
      try {
        scenario = builtin_scenario(text(base, "base"));
      } catch (const std::invalid_argument& e) {
        fail(base, e.what());
      }
    }
    if (const auto name = root["name"]) scenario.name = text(name, "name");
    if (scenario.name.empty()) scenario.name = "custom";

    if (const auto params = root["params"]) read_params(params, scenario.params);
    check(scenario.params, root);

    if (const auto sim = root["sim"]) {
      SimConfig config = scenario.sim.value_or(SimConfig{});
      read_sim(sim, scenario.params, config);
      scenario.sim = config;
    }
    if (const auto sweep = root["sweep"]) read_sweep(sweep, scenario);
    if (const auto output = root["output"]) scenario.output = text(output, "output");
    return scenario;
  }

 private:
  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
    const auto mark = node.Mark();
    throw ConfigError(source_, mark.is_null() ? 0 : mark.line + 1,
                      mark.is_null() ? 0 : mark.column + 1, message);
  }

  void allow_keys(const YAML::Node& map, std::set<std::string> allowed) const {
    for (const auto& entry : map) {
      const auto key = entry.first.as<std::string>();
      if (!allowed.contains(key)) fail(entry.first, "unknown key '" + key + "'");
    }
  }

  double number(const YAML::Node& node, const std::string& field) const {
    try {
      const double v = node.as<double>();
      if (!std::isfinite(v)) fail(node, field + ": value must be finite");
      return v;
    } catch (const YAML::Exception&) {
      fail(node, field + ": expected a number");
    }
  }

  std::uint64_t count(const YAML::Node& node, const std::string& field) const {
    try {
      return node.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      fail(node, field + ": expected a non-negative integer");
    }
  }

  std::string text(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field + ": expected a scalar");
    return node.as<std::string>();
  }

  std::vector<double> numbers(const YAML::Node& node, const std::string& field) const {
    if (!node.IsSequence()) fail(node, field + ": expected a list of numbers");
    std::vector<double> values;
    for (const auto& item : node) values.push_back(number(item, field));
    return values;
  }

  // Linear value from `key` or decibels from `key_db`; never both.
  bool threshold(const YAML::Node& map, const std::string& key, double& target) {
    const auto linear = map[key];
    const auto decibel = map[key + "_db"];
    if (linear && decibel) fail(decibel, key + " and " + key + "_db are mutually exclusive");
    if (linear) {
      target = number(linear, key);
      field_marks_[key] = linear;
      return true;
    }
    if (decibel) {
      target = std::pow(10.0, number(decibel, key + "_db") / 10.0);
      field_marks_[key] = decibel;
      return true;
    }
    return false;
  }

  void read_params(const YAML::Node& node, NetworkParams& params) {
    if (!node.IsMap()) fail(node, "params: expected a mapping");
    allow_keys(node, {"lambda_b", "lambda_d", "power_b", "power_d", "beta", "kappa", "moment_b",
                      "moment_d", "tau_d", "tau_d_db", "tau_b_min", "tau_b_min_db", "delta",
                      "r_mode", "r"});
    params_node_ = node;
    const auto scalar = [&](const char* key, double& target) {
      if (const auto value = node[key]) {
        target = number(value, key);
        field_marks_[key] = value;
        return true;
      }
      return false;
    };
    scalar("lambda_b", params.lambda_b);
    scalar("lambda_d", params.lambda_d);
    scalar("power_b", params.power_b);
    scalar("power_d", params.power_d);
    const bool beta_given = scalar("beta", params.beta);
    scalar("kappa", params.kappa);
    const bool moment_b_given = scalar("moment_b", params.moment_b);
    const bool moment_d_given = scalar("moment_d", params.moment_d);
    threshold(node, "tau_d", params.tau_d);
    threshold(node, "tau_b_min", params.tau_b_min);
    scalar("delta", params.delta);
    if (const auto mode = node["r_mode"]) {
      field_marks_["r_mode"] = mode;
      try {
        params.r_mode = link_distance_mode_from_string(text(mode, "r_mode"));
      } catch (const std::invalid_argument& e) {
        fail(mode, e.what());
      }
    }
    if (scalar("r", params.r_explicit) && !node["r_mode"]) {
      params.r_mode = LinkDistanceMode::Explicit;
    }
    // Moments not spelled out follow beta as Rayleigh moments.
    if (beta_given && !moment_b_given) params.moment_b = 0;
    if (beta_given && !moment_d_given) params.moment_d = 0;
    if (params.beta > 2) params = with_default_moments(params);
  }

  void check(const NetworkParams& params, const YAML::Node& root) const {
    const auto issues = check_params(params);
    if (issues.empty()) return;
    std::ostringstream message;
    YAML::Node first_node = params_node_ ? params_node_ : root;
    bool first = true;
    for (const auto& issue : issues) {
      const auto found = field_marks_.find(issue.field);
      const YAML::Node where = found != field_marks_.end() ? found->second
                               : params_node_           ? params_node_
                                                        : root;
      if (first) first_node = where;
      const auto mark = where.Mark();
      if (!first) message << "\n  ";
      message << format_location(source_, mark.is_null() ? 0 : mark.line + 1, 0) << ": "
              << issue.field << ": " << issue.message;
      first = false;
    }
    fail(first_node, "invalid parameters: " + message.str());
  }

  FadingModel read_fading(const YAML::Node& node, double target_moment, double beta) const {
    if (!node.IsMap()) fail(node, "fading: expected a mapping with a 'kind' key");
    allow_keys(node, {"kind", "mean", "mu", "sigma", "value"});
    if (!node["kind"]) fail(node, "fading: missing 'kind'");
    const auto kind = text(node["kind"], "kind");
    try {
      if (kind == "exponential") {
        return FadingModel::exponential(node["mean"] ? number(node["mean"], "mean") : 1.0);
      }
      if (kind == "lognormal") {
        if (!node["sigma"]) fail(node, "lognormal fading needs 'sigma'");
        const double sigma = number(node["sigma"], "sigma");
        if (node["mu"]) return FadingModel::lognormal(number(node["mu"], "mu"), sigma);
        return FadingModel::lognormal_matched(sigma, target_moment, beta);
      }
      if (kind == "constant") {
        if (node["value"]) return FadingModel::constant(number(node["value"], "value"));
        return FadingModel::constant_matched(target_moment, beta);
      }
    } catch (const std::invalid_argument& e) {
      fail(node, e.what());
    }
    fail(node["kind"], "unknown fading kind '" + kind + "' (expected exponential, lognormal or constant)");
  }

  void read_sim(const YAML::Node& node, const NetworkParams& params, SimConfig& config) const {
    if (!node.IsMap()) fail(node, "sim: expected a mapping");
    allow_keys(node, {"trials", "seed", "window_radius", "threads", "thinning", "base_fading",
                      "device_fading", "extra_tiers"});
    if (const auto v = node["trials"]) {
      config.trials = count(v, "trials");
      if (config.trials == 0) fail(v, "trials must be at least 1");
    }
    if (const auto v = node["seed"]) config.seed = count(v, "seed");
    if (const auto v = node["window_radius"]) {
      config.window_radius = number(v, "window_radius");
      if (config.window_radius < 0) fail(v, "window_radius must be non-negative (0 = automatic)");
    }
    if (const auto v = node["threads"]) config.threads = static_cast<unsigned>(count(v, "threads"));
    if (const auto v = node["thinning"]) {
      const auto method = text(v, "thinning");
      if (method == "density") {
        config.thinning = ThinningMethod::Density;
      } else if (method == "marking") {
        config.thinning = ThinningMethod::Marking;
      } else {
        fail(v, "thinning must be 'density' or 'marking'");
      }
    }
    if (const auto v = node["base_fading"]) {
      config.base_fading = read_fading(v, params.moment_b, params.beta);
    }
    if (const auto v = node["device_fading"]) {
      config.device_fading = read_fading(v, params.moment_d, params.beta);
    }
    if (const auto v = node["extra_tiers"]) {
      if (!v.IsSequence()) fail(v, "extra_tiers: expected a list of tiers");
      config.extra_tiers.clear();
      for (const auto& item : v) config.extra_tiers.push_back(read_tier(item, params.beta));
    }
  }

  TierConfig read_tier(const YAML::Node& node, double beta) const {
    if (!node.IsMap()) fail(node, "extra tier: expected a mapping");
    allow_keys(node, {"density", "power", "fading"});
    TierConfig tier;
    if (!node["density"]) fail(node, "extra tier: missing 'density'");
    tier.density = number(node["density"], "density");
    if (tier.density < 0) fail(node["density"], "density must be non-negative");
    if (const auto v = node["power"]) {
      tier.power = number(v, "power");
      if (!(tier.power > 0)) fail(v, "power must be positive");
    }
    if (const auto v = node["fading"]) tier.fading = read_fading(v, rayleigh_moment(beta), beta);
    return tier;
  }

  void read_sweep(const YAML::Node& node, Scenario& scenario) const {
    if (!node.IsMap()) fail(node, "sweep: expected a mapping");
    allow_keys(node, {"points", "values", "lambda_d"});
    if (const auto v = node["points"]) {
      scenario.grid.points = count(v, "points");
      scenario.grid.values.clear();
      if (scenario.grid.points == 0) fail(v, "points must be at least 1");
    }
    if (const auto v = node["values"]) {
      scenario.grid.values = numbers(v, "values");
      for (std::size_t i = 0; i < scenario.grid.values.size(); ++i) {
        const double p = scenario.grid.values[i];
        if (p < 0 || p > 1) fail(v[i], "grid values must lie in [0, 1]");
        if (i > 0 && p < scenario.grid.values[i - 1]) fail(v[i], "grid values must be sorted");
      }
    }
    if (const auto v = node["lambda_d"]) {
      scenario.lambda_d_grid = numbers(v, "lambda_d");
      for (std::size_t i = 0; i < scenario.lambda_d_grid.size(); ++i) {
        if (!(scenario.lambda_d_grid[i] > 0)) fail(v[i], "lambda_d values must be positive");
      }
    }
  }

  std::string source_;
  YAML::Node params_node_;
  std::map<std::string, YAML::Node> field_marks_;
};

void emit_fading(YAML::Emitter& out, const FadingModel& model) {
  out << YAML::BeginMap;
  switch (model.kind()) {
    case FadingModel::Kind::Exponential:
      out << YAML::Key << "kind" << YAML::Value << "exponential";
      out << YAML::Key << "mean" << YAML::Value << shortest(model.first());
      break;
    case FadingModel::Kind::Lognormal:
      out << YAML::Key << "kind" << YAML::Value << "lognormal";
      out << YAML::Key << "mu" << YAML::Value << shortest(model.first());
      out << YAML::Key << "sigma" << YAML::Value << shortest(model.second());
      break;
    case FadingModel::Kind::Constant:
      out << YAML::Key << "kind" << YAML::Value << "constant";
      out << YAML::Key << "value" << YAML::Value << shortest(model.first());
      break;
  }
  out << YAML::EndMap;
}

NetworkParams figure_params(double delta, LinkDistanceMode mode) {
  NetworkParams params;
  params.lambda_b = 1;
  params.lambda_d = 5;
  params.power_b = 25;
  params.power_d = 1;
  params.beta = 4;
  params.kappa = 1;
  params.moment_b = rayleigh_moment(4);
  params.moment_d = rayleigh_moment(4);
  params.tau_d = 1;
  params.tau_b_min = 1;
  params.delta = delta;
  params.r_mode = mode;
  return params;
}

}  // namespace

std::vector<double> GridSpec::resolve() const {
  if (!values.empty()) return values;
  return uniform_grid(points);
}

ConfigError::ConfigError(const std::string& source, int line, int column, const std::string& message)
    : std::runtime_error(format_location(source, line, column) + ": " + message),
      line_(line),
      column_(column) {}

std::vector<std::string> builtin_scenario_names() { return {"fig1", "fig3", "fig4", "fig5"}; }

Scenario builtin_scenario(std::string_view name) {
  Scenario scenario;
  scenario.name = std::string(name);
  scenario.sim = SimConfig{};
  if (name == "fig1") {
    scenario.params = figure_params(0.45, LinkDistanceMode::IntraCell);
  } else if (name == "fig3") {
    scenario.params = figure_params(0.9, LinkDistanceMode::IntraCell);
  } else if (name == "fig4") {
    scenario.params = figure_params(0.45, LinkDistanceMode::ExtraCell);
  } else if (name == "fig5") {
    scenario.params = figure_params(0.45, LinkDistanceMode::IntraCell);
    for (int i = 1; i <= 40; ++i) scenario.lambda_d_grid.push_back(0.5 * i);
  } else {
    throw std::invalid_argument("unknown built-in scenario '" + std::string(name) +
                                "' (expected fig1, fig3, fig4 or fig5)");
  }
  return scenario;
}

Scenario parse_scenario(std::string_view text, std::string_view source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(std::string(source), e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  return ScenarioReader(std::string(source)).read(root);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, 0, "cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path);
}

std::string serialize_scenario(const Scenario& scenario) {
  const auto& p = scenario.params;
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << scenario.name;
  out << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "lambda_b" << YAML::Value << shortest(p.lambda_b);
  out << YAML::Key << "lambda_d" << YAML::Value << shortest(p.lambda_d);
  out << YAML::Key << "power_b" << YAML::Value << shortest(p.power_b);
  out << YAML::Key << "power_d" << YAML::Value << shortest(p.power_d);
  out << YAML::Key << "beta" << YAML::Value << shortest(p.beta);
  out << YAML::Key << "kappa" << YAML::Value << shortest(p.kappa);
  out << YAML::Key << "moment_b" << YAML::Value << shortest(p.moment_b);
  out << YAML::Key << "moment_d" << YAML::Value << shortest(p.moment_d);
  out << YAML::Key << "tau_d" << YAML::Value << shortest(p.tau_d);
  out << YAML::Key << "tau_b_min" << YAML::Value << shortest(p.tau_b_min);
  out << YAML::Key << "delta" << YAML::Value << shortest(p.delta);
  out << YAML::Key << "r_mode" << YAML::Value << to_string(p.r_mode);
  out << YAML::Key << "r" << YAML::Value << shortest(p.r_explicit);
  out << YAML::EndMap;

  if (scenario.sim) {
    const auto& s = *scenario.sim;
    out << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "trials" << YAML::Value << s.trials;
    out << YAML::Key << "seed" << YAML::Value << s.seed;
    out << YAML::Key << "window_radius" << YAML::Value << shortest(s.window_radius);
    out << YAML::Key << "threads" << YAML::Value << s.threads;
    out << YAML::Key << "thinning" << YAML::Value
        << (s.thinning == ThinningMethod::Density ? "density" : "marking");
    out << YAML::Key << "base_fading" << YAML::Value;
    emit_fading(out, s.base_fading);
    out << YAML::Key << "device_fading" << YAML::Value;
    emit_fading(out, s.device_fading);
    if (!s.extra_tiers.empty()) {
      out << YAML::Key << "extra_tiers" << YAML::Value << YAML::BeginSeq;
      for (const auto& tier : s.extra_tiers) {
        out << YAML::BeginMap;
        out << YAML::Key << "density" << YAML::Value << shortest(tier.density);
        out << YAML::Key << "power" << YAML::Value << shortest(tier.power);
        out << YAML::Key << "fading" << YAML::Value;
        emit_fading(out, tier.fading);
        out << YAML::EndMap;
      }
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;
  }

  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "points" << YAML::Value << scenario.grid.points;
  if (!scenario.grid.values.empty()) {
    out << YAML::Key << "values" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const double v : scenario.grid.values) out << shortest(v);
    out << YAML::EndSeq;
  }
  if (!scenario.lambda_d_grid.empty()) {
    out << YAML::Key << "lambda_d" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const double v : scenario.lambda_d_grid) out << shortest(v);
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  if (!scenario.output.empty()) out << YAML::Key << "output" << YAML::Value << scenario.output;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace d2dopt

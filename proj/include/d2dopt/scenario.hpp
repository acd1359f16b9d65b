#ifndef D2DOPT_SCENARIO_HPP
#define D2DOPT_SCENARIO_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "d2dopt/montecarlo.hpp"
#include "d2dopt/params.hpp"

namespace d2dopt {

/// Probability grid for sweeps: explicit values win over a uniform count.
struct GridSpec {
  std::size_t points = 201;
  std::vector<double> values;

  std::vector<double> resolve() const;
  bool operator==(const GridSpec&) const = default;
};

struct Scenario {
  std::string name;
  NetworkParams params;
  std::optional<SimConfig> sim;
  GridSpec grid;
  /// Non-empty turns the sweep into a device-density scaling table.
  std::vector<double> lambda_d_grid;
  std::string output;

  bool operator==(const Scenario&) const = default;
};

/// Parse or validation failure in a scenario file. line/column are 1-based,
/// 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, int column, const std::string& message);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// fig1, fig3, fig4, fig5.
std::vector<std::string> builtin_scenario_names();

/// Throws std::invalid_argument for unknown names.
Scenario builtin_scenario(std::string_view name);

/// YAML scenario text. An optional top-level `base:` key starts from a
/// built-in scenario whose values the file then overrides.
Scenario parse_scenario(std::string_view text, std::string_view source = "<config>");

Scenario load_scenario(const std::string& path);

/// YAML text that parse_scenario maps back to an equal Scenario.
std::string serialize_scenario(const Scenario& scenario);

}  // namespace d2dopt

#endif  // D2DOPT_SCENARIO_HPP

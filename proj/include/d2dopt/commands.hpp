#ifndef D2DOPT_COMMANDS_HPP
#define D2DOPT_COMMANDS_HPP

#include <string>
#include <vector>

#include "d2dopt/scenario.hpp"

namespace d2dopt {

/// Shortest round-trip decimal text, independent of the global locale.
std::string format_number(double value);

/// value rounded to the given number of significant digits.
std::string format_significant(double value, int digits = 6);

/// Human-readable summary: propagation constants, optimum, regime, delta*.
std::string analyze_report(const Scenario& scenario);

/// p-grid CSV (p,D_analytic,coverage_d2d,degradation_ratio,constraint_ok), or
/// the density scaling table (lambda_d,regime,p_star,D_p_star) when the
/// scenario carries a lambda_d grid.
std::string sweep_csv(const Scenario& scenario);

struct SimulationRow {
  std::string quantity;
  double analytic = 0;
  CoverageEstimate estimate;
  double z = 0;
  bool pass = true;
};

/// |z| above which a Monte Carlo comparison is flagged.
inline constexpr double kZThreshold = 3.0;

/// Monte Carlo oracles against the closed forms: downlink coverage at p = 0
/// and p = p*, D2D coverage at p*, and propagation invariance against a
/// moment-matched lognormal. Requires scenario.sim.
std::vector<SimulationRow> run_simulation(const Scenario& scenario);

/// quantity,analytic,mc_mean,mc_stderr,z
std::string simulation_csv(const std::vector<SimulationRow>& rows);

/// Writes text to path; throws std::runtime_error if the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace d2dopt

#endif  // D2DOPT_COMMANDS_HPP

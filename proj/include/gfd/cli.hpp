#pragma once

#include "gfd/analysis.hpp"
#include "gfd/geometry.hpp"
#include "gfd/model.hpp"
#include "gfd/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gfd::cli {

enum class InitialKind { bump, cosine, mixed, constant };

struct InitialSpec {
  InitialKind kind = InitialKind::bump;
  double a = 0.1;
  double b = 5.0;
  double value = 1.0;
};

struct SimulationConfig {
  // Exactly one of grid_n / cloud_path is set.
  std::optional<int> grid_n;
  std::string cloud_path;
  int star_size = kDefaultStarSize;
  double weight_power = 1.0;
  double dt = 0.0;
  double t_final = 0.0;
  std::vector<double> report_times;
  std::vector<double> snapshot_times;
  std::string gamma = "gamma1";
  double mu = 0.0;
  InitialSpec initial;
  StabilityMode stability = StabilityMode::warn;
  int cadence = kDefaultStabilityCadence;
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  bool dump_stencils = false;
};

/// Flat `section.key -> value` view of a configuration document.
using ConfigMap = std::map<std::string, std::string>;

/// Reads an INI-style document:
///
///   [section]
///   key = value      # comment
///
/// Sections: discretization (grid | cloud, star_size, weight_power, seed),
/// time (dt, t_final, report_times, snapshot_times), model (gamma, mu,
/// initial, bump_a, bump_b, initial_value), stability (mode, cadence),
/// output (dir). Lists are comma separated. Throws ConfigError on unknown
/// sections or keys and on malformed lines.
ConfigMap read_config_map(std::istream& in);

/// Applies defaults, converts and validates. Throws ConfigError naming the
/// offending key.
SimulationConfig config_from_map(const ConfigMap& map);

SimulationConfig parse_config(std::istream& in);

/// Re-checks the invariants of an assembled config.
void validate_config(const SimulationConfig& config);

std::vector<std::string> preset_names();
/// The INI text of a built-in preset. Throws ConfigError("preset") if unknown.
std::string preset_text(const std::string& name);
ConfigMap preset_map(const std::string& name);
SimulationConfig preset(const std::string& name);

/// Domain cloud with ghosts added.
PointCloud build_cloud(const SimulationConfig& config);
InitialCondition make_initial(const SimulationConfig& config);
ModelParams make_params(const SimulationConfig& config);
RunSettings make_settings(const SimulationConfig& config);

struct RunOutcome {
  RunResult result;
  bool aborted = false;
  std::string message;
};

/// Runs one configuration and writes under config.output_dir:
/// errors.csv, bounds.csv, snapshot_t<time>.csv per snapshot time and,
/// on abort, last_state.csv. Partial artifacts are written before returning.
RunOutcome run_command(const SimulationConfig& config, std::ostream& log);

/// Writes convergence.csv under output_dir.
ConvergenceStudy study_command(const std::vector<int>& resolutions, int star_size,
                               double weight_power, const std::string& output_dir,
                               std::ostream& log);

struct CompareOutcome {
  RunOutcome a;
  RunOutcome b;
  DominanceTable table;
};

/// Runs `base` with gamma1 and gamma2 (into gamma1/ and gamma2/ under
/// base.output_dir) and writes dominance.csv comparing gamma1 against gamma2.
CompareOutcome compare_command(const SimulationConfig& base, std::ostream& log);

HypothesisReport validate_command(const SimulationConfig& config, std::ostream& log);

void write_snapshot_csv(const PointCloud& cloud, const Eigen::VectorXd& U,
                        const Eigen::VectorXd& V, std::ostream& out);
void write_bounds_csv(const std::vector<BoundRecord>& bounds, std::ostream& out);

/// Entry point used by the gfd_chemotaxis executable. Returns the exit code.
int main(int argc, char** argv);

}  // namespace gfd::cli

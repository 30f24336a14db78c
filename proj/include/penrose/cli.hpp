#pragma once

// Batch front-end: scenario configs, command runners and the argument parser
// behind the penrose-cli executable.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "penrose/errors.hpp"
#include "penrose/radial_geometry.hpp"
#include "penrose/report.hpp"

namespace penrose::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kConfigError = 2,
  kViolated = 3,
  kDegenerate = 4,
  kTrumpetFailed = 5,
};

// Malformed or out-of-range configuration; the message names the line or field.
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

struct ProfileSpec {
  std::string kind = "schwarzschild";  // euclidean, schwarzschild, schwarzschild_like,
                                       // cylinder, trumpet, tabulated
  double mass = 1.0;
  double a = 1.0;
  double b = 0.5;
  std::optional<double> r0;     // trumpet gluing radius
  std::optional<double> alpha;  // trumpet constant
  std::filesystem::path path;   // tabulated samples
};

struct ScenarioConfig {
  std::string command;
  std::string name = "run";
  int dimension = 3;
  ProfileSpec profile;
  std::optional<RadialGrid> grid;
  double quadrature_tolerance = 1e-10;
  double el_tolerance = 1e-6;
  double equality_tolerance = 1e-6;
  double r0 = 2.0;  // mu-bubble anchor radius
  std::optional<double> epsilon;
  std::optional<double> beta;
  std::vector<double> epsilons;
  double gamma = 1.5;
  std::filesystem::path output_dir = ".";
  bool wall_time = false;
  std::vector<ScenarioConfig> scenarios;  // batch only
};

extern const std::vector<std::string> kCommands;

// Relative paths inside the config are resolved against base_dir.
ScenarioConfig parse_config(const Json& j, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);
void validate(const ScenarioConfig& cfg);
Json to_json(const ScenarioConfig& cfg);

RadialProfile make_profile(const ScenarioConfig& cfg);

struct CommandResult {
  Json report;
  std::optional<Table> table;
  int exit_code = kOk;
  std::vector<std::string> summary;  // human-readable lines for stdout
  std::optional<RadialProfile> exported_profile;  // trumpet export
};

CommandResult cmd_analyze(const ScenarioConfig& cfg);
CommandResult cmd_penrose(const ScenarioConfig& cfg);
CommandResult cmd_mu_bubble(const ScenarioConfig& cfg);
CommandResult cmd_horizon(const ScenarioConfig& cfg);
CommandResult cmd_rigidity(const ScenarioConfig& cfg);
CommandResult cmd_trumpet(const ScenarioConfig& cfg);
CommandResult cmd_batch(const ScenarioConfig& cfg);

// Runs one scenario, writes <output_dir>/<name>.json (plus .csv or
// .profile.txt) and returns the exit code. Module errors are reported on err.
int run_scenario(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace penrose::cli

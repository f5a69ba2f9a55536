#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsw::cli {

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kUsageError = 2, kNumericalFailure = 3 };

/// Raised for invalid command lines or option values; the message names the field.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help / --version: the message is printed and the exit code is 0.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string subcommand;

  // Expressions.
  std::string expr;
  std::string h;
  std::string g;
  std::string hamiltonian;
  std::vector<std::string> params;  // name=value
  std::optional<std::size_t> modes;
  std::string rule = "normal";

  // Ensembles and states.
  std::string ensemble;
  std::string alpha;

  // Lattice.
  std::string model_path;
  std::size_t sites = 2;
  double spacing = 1.0;
  std::vector<double> masses{1.0};
  std::string interaction;
  std::size_t configs = 10;
  double amplitude = 0.5;

  // Numerics.
  std::optional<double> energy;
  double k = 2.0;
  double T = 5.0;
  double dt = 1e-2;
  double gamma = 0.0;
  bool damped = false;
  std::vector<unsigned> cutoffs;
  std::size_t count = 20000;
  std::size_t samples = 20;
  unsigned order = 8;
  unsigned max_degree = 6;
  std::optional<double> tolerance;
  std::uint64_t seed = 1;
  std::string expect;

  // Output.
  std::string format;
  std::string out_path;
  std::string dump_prefix;
};

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::string relation;  // "<=", ">=" or "=="
  bool pass = false;
};

struct Report {
  std::string subcommand;
  nlohmann::json config = nlohmann::json::object();
  std::vector<Check> checks;
  nlohmann::json results = nlohmann::json::object();
  /// Plain-text rendering for subcommands that have one.
  std::string text;
  double elapsed_seconds = 0.0;

  bool passed() const;
};

/// Throws UsageError. argv[0] is the program name.
ExperimentConfig parse_arguments(int argc, const char* const* argv);

/// Validates, dispatches and times one subcommand. Library errors propagate.
Report run(const ExperimentConfig& config);

/// json: full report; csv: check table plus any "series" rows; text: Report::text.
std::string render(const Report& report, const std::string& format);
/// Report as JSON with sorted keys.
nlohmann::json to_json(const Report& report);

/// Full command-line entry point: parse, run, write, map errors to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string version();

}  // namespace gsw::cli

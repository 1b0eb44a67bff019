#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace paqft {

// Experiment runner: builds the lattice theory described by a config, executes
// named check suites, and serializes the results.  Checks never throw on
// failure; a failing identity is a report row with pass = false.

struct RunConfig {
  int n_t = 16;
  int n_x = 8;
  double dt = 0.5;
  double dx = 1.0;
  double mass = 1.0;
  int lambda_order = 2;
  double tolerance = 1e-9;
  std::uint64_t seed = 1;
  std::vector<std::string> experiments;
  std::string output_path;  // empty: stdout
  std::string format = "json";
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// INI-style sections [lattice] [model] [run] [output]; '#' and ';' comments.
// Unknown sections or keys are ConfigErrors: a validated config cannot
// violate a module precondition, so nothing may be silently ignored.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

const std::vector<std::string>& known_suites();

// Throws ConfigError naming the violated precondition (CFL bound, mass
// positivity, perturbative margin, suite names, ...).
void validate_config(const RunConfig& cfg);

struct CheckRecord {
  std::string suite;
  std::string check_id;
  std::string anchor;  // name of the defining identity being asserted
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double seconds = 0.0;
};

struct Report {
  RunConfig config;
  double kappa = 1.0;
  double kappa_prime = 1.0;
  std::vector<CheckRecord> checks;
  bool all_pass = true;
};

// Executes the configured suites.  Deterministic for a fixed config and seed:
// each suite draws from its own generator seeded by hashing the suite name
// into the run seed, and records are assembled in declared suite order.
// PAQFT_THREADS caps suite-level parallelism (unset/1 = one worker, 0 = run
// everything on the calling thread).
Report run(const RunConfig& cfg);

// JSON carries no wall-clock fields, so identical config + seed gives
// identical bytes; the CSV rows append a seconds column.
std::string emit_json(const Report& rep);
std::string emit_csv(const Report& rep);

// Serializes in cfg.format and writes to path ("" or "-": stdout).
void write_report(const Report& rep, const std::string& path);

}  // namespace paqft

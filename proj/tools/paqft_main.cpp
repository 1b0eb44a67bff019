// Command-line front end: parses a run config, executes the requested check
// suites, and writes the report.  Exit codes: 0 all checks pass, 1 at least
// one check failed, 2 configuration or usage error.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "paqft/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"finite-lattice perturbative QFT experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_path, format;
  std::vector<std::string> suites;
  CLI::App* run_cmd = app.add_subcommand("run", "execute the configured check suites");
  run_cmd->add_option("--config", config_path, "INI-style run configuration")
      ->required();
  run_cmd->add_option("--out", out_path,
                      "report destination ('-' = stdout; overrides the config)");
  run_cmd->add_option("--format", format, "json or csv (overrides the config)");
  run_cmd->add_option("--suite", suites,
                      "suite to run, repeatable (overrides the config experiments)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    paqft::RunConfig cfg = paqft::parse_config_file(config_path);
    if (!suites.empty()) cfg.experiments = suites;
    if (!format.empty()) cfg.format = format;
    if (!out_path.empty()) cfg.output_path = out_path;
    paqft::validate_config(cfg);
    const paqft::Report rep = paqft::run(cfg);
    paqft::write_report(rep, cfg.output_path);
    return rep.all_pass ? 0 : 1;
  } catch (const paqft::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

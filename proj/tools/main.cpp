#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "condlab/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"condenser lab: constrained minimum-energy problems with touching plates"};
  app.require_subcommand(1);

  std::string scenario_path;
  condlab::RunOptions options;
  double tol_value = 0.0;
  bool tol_set = false;

  CLI::App* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("scenario", scenario_path, "scenario file (text or json)")->required();
  run->add_flag("--check-only", options.check_only, "validate inputs without solving");
  run->add_option("--jobs", options.jobs, "worker threads for parallel experiments")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", options.out_dir, "output directory (default out/<name>)");
  run->add_option("--tol", tol_value, "override the scenario tolerance")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string&) { tol_set = true; });

  CLI11_PARSE(app, argc, argv);

  if (tol_set) options.tol = tol_value;
  if (const char* env = std::getenv("CONDENSER_LAB_SEED")) {
    try {
      options.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "invalid CONDENSER_LAB_SEED: " << env << "\n";
      return condlab::kExitInputError;
    }
  }

  condlab::Scenario scenario;
  try {
    scenario = condlab::parse_scenario_file(scenario_path);
  } catch (const condlab::input_error& e) {
    std::cerr << e.what() << "\n";
    return condlab::kExitInputError;
  }

  const int code = condlab::run_scenario(std::move(scenario), options);
  if (code != condlab::kExitOk) std::cerr << "scenario exited with code " << code << "\n";
  return code;
}

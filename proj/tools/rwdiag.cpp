// Scenario runner: seeded random-walk experiments on concrete groups with
// machine-readable reports. Exit codes: 0 success, 2 validation error,
// 3 budget exceeded, 4 diagnostic verdict differs from the expected one.

#include "rwdiag/errors.hpp"
#include "rwdiag/scenario.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"rwdiag: random-walk boundary diagnostics on concrete groups"};
  app.require_subcommand(1);

  std::string run_file;
  std::uint64_t seed = 0;
  std::uint64_t paths = 0;
  std::int64_t steps = 0;
  std::string out_dir;
  int threads = 1;
  auto* run = app.add_subcommand("run", "execute a scenario file");
  run->add_option("file", run_file, "scenario JSON file")->required();
  auto* seed_opt = run->add_option("--seed", seed, "override the master seed");
  auto* paths_opt = run->add_option("--paths", paths, "override the ensemble size");
  auto* steps_opt = run->add_option("--steps", steps, "override the horizon");
  auto* out_opt = run->add_option("--out", out_dir, "override the output directory");
  run->add_option("--threads", threads, "worker threads (results identical for any value)");

  std::string list_dir = "scenarios";
  auto* list = app.add_subcommand("list", "catalog the scenario files in a directory");
  list->add_option("dir", list_dir, "directory to scan");

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "parse and validate a scenario file");
  validate->add_option("file", validate_file, "scenario JSON file")->required();

  auto* kinds = app.add_subcommand("kinds", "print the available experiment kinds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const rwdiag::Scenario sc = rwdiag::load_scenario(run_file);
      rwdiag::RunOverrides ov;
      if (seed_opt->count() > 0) ov.seed = seed;
      if (paths_opt->count() > 0) ov.paths = paths;
      if (steps_opt->count() > 0) ov.steps = steps;
      if (out_opt->count() > 0) ov.out_dir = out_dir;
      ov.threads = threads;
      const rwdiag::RunOutcome outcome = rwdiag::run_scenario(sc, ov);
      std::cout << outcome.report.dump(2) << "\n";
      std::cerr << "wall-clock: " << outcome.wall_seconds << " s\n";
      for (const auto& artifact : outcome.artifacts) {
        std::cerr << "wrote " << artifact << "\n";
      }
      if (!outcome.matches_expectation) {
        std::cerr << "verdict " << (outcome.verdict_pass ? "pass" : "fail") << ", expected "
                  << sc.expect << "\n";
        return 4;
      }
      return 0;
    }
    if (*list) {
      const auto catalog = rwdiag::list_scenarios(list_dir);
      for (const auto& entry : catalog) {
        std::cout << entry.file << "\t" << entry.kind << "\t" << entry.name << "\n";
      }
      return 0;
    }
    if (*validate) {
      const rwdiag::Scenario sc = rwdiag::load_scenario(validate_file);
      std::cout << "ok: " << sc.name << " (" << sc.kind << ")\n";
      return 0;
    }
    if (*kinds) {
      for (const auto& kind : rwdiag::experiment_kinds()) std::cout << kind << "\n";
      return 0;
    }
  } catch (const rwdiag::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const rwdiag::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

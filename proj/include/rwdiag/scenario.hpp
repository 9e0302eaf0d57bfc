#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rwdiag {

/// Parsed scenario file (versioned schema, fail-closed: unknown fields are
/// rejected). The kind-specific experiment block is validated against the
/// per-kind field table.
struct Scenario {
  nlohmann::ordered_json raw;
  std::string name;
  std::string kind;
  std::int64_t horizon = 0;
  std::uint64_t ensemble = 0;
  std::uint64_t seed = 0;
  std::string expect = "pass";  // negative controls declare expect = "fail"
};

Scenario parse_scenario(const nlohmann::ordered_json& j);
Scenario load_scenario(const std::filesystem::path& file);

const std::vector<std::string>& experiment_kinds();

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> paths;
  std::optional<std::int64_t> steps;
  std::optional<std::string> out_dir;
  int threads = 1;
};

struct RunOutcome {
  nlohmann::ordered_json report;
  bool verdict_pass = true;       // diagnostic verdict before expect matching
  bool matches_expectation = true;
  double wall_seconds = 0.0;      // logged, never stored in the report
  std::vector<std::string> artifacts;
};

/// Executes the scenario and writes report.json (+ CSV traces) under the
/// output directory. The report JSON is byte-identical for identical
/// (scenario, seed, version), independent of thread count.
RunOutcome run_scenario(const Scenario& scenario, const RunOverrides& overrides);

struct CatalogEntry {
  std::string file;
  std::string name;
  std::string kind;
};

std::vector<CatalogEntry> list_scenarios(const std::filesystem::path& dir);

}  // namespace rwdiag

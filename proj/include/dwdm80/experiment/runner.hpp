#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dwdm80/experiment/config.hpp"

namespace dwdm80::experiment {

/// Runs task(i) for i in [0, n) on up to `jobs` threads. Each task writes
/// only its own result slot, so the outcome does not depend on scheduling.
/// If tasks throw, the exception of the lowest index is rethrown after all
/// threads finish.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task);

/// Jobs from DWDM80_JOBS when set to a positive integer, else 1.
std::size_t default_jobs();

struct RunOptions {
  std::filesystem::path out_dir = "results";
  std::size_t jobs = 1;
  std::optional<std::uint64_t> seed;  // overrides the config's root seed
};

struct RunSummary {
  std::filesystem::path directory;
  std::size_t rows = 0;
  std::vector<std::string> files;
  std::vector<std::string> warnings;
};

/// Runs every work unit of the scenario, then writes results.csv,
/// snr_profile.csv (when requested) and manifest.json into
/// <out_dir>/<id>/. Files appear only after all units succeed.
RunSummary run_scenario(Scenario scenario, const RunOptions& options);

/// Header of results.csv for a kind.
std::vector<std::string> csv_columns(ScenarioKind kind);

}  // namespace dwdm80::experiment

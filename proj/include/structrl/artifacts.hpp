#pragma once

#include <string>
#include <vector>

#include "structrl/config.hpp"
#include "structrl/harness.hpp"

namespace structrl {

/// Per-run artifact file prefix, e.g. "baseline_s0".
std::string run_prefix(const RunResult& r);

/// Writes one run's grids (d, sigma, t*, visit, replay) and traces (sigma,
/// greedy, edges) under <dir>/grids and <dir>/traces.
void write_run_artifacts(const std::string& dir, const ExperimentConfig& cfg,
                         const RunResult& r);

/// Writes <dir>/manifest, <dir>/returns.csv, <dir>/summary.csv, and
/// <dir>/curves.svg covering every given run.
void write_shared_artifacts(const std::string& dir, const ExperimentConfig& cfg,
                            const std::vector<RunResult>& results);

/// Rebuilds the config from a run manifest; "run_"-prefixed entries describe
/// individual runs and are skipped.
ExperimentConfig config_from_manifest(const std::string& manifest_path);

SigmaTrace read_sigma_trace(const std::string& path);
StabilityTrace read_greedy_trace(const std::string& path, int window);
std::vector<ObservedEdge> read_edges(const std::string& path, const GridSpec& spec);

}  // namespace structrl

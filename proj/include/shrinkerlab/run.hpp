#pragma once

#include <string>
#include <vector>

#include "shrinkerlab/config.hpp"
#include "shrinkerlab/flow.hpp"
#include "shrinkerlab/harness.hpp"

namespace shrinkerlab {

/// Everything a completed (or halted) run leaves behind.
struct ReportBundle {
  std::string outdir;
  std::string diagnostics_csv;
  std::string kernel_csv;
  std::string manifest_path;
  std::vector<std::string> snapshots;
  std::vector<SeriesRow> rows;
  GraphField final_state;
  double final_s = 0.0;
  std::string halt_reason;  // empty when the run completed
  bool checks_pass = true;
};

/// Resolves the output root: SHRINKERLAB_OUT overrides the config directory.
std::string resolve_outdir(const std::string& configured);

/// Builds the initial field from the perturbation terms (tapered unit modes).
GraphField initial_field(const DiscPtr& disc, const std::vector<PerturbationTerm>& terms);

/// Runs the flow, writes diagnostics/snapshots/manifest, post-processes the
/// fitted-cylinder, scale and shrinker columns.  Deterministic for a fixed
/// config + seed.
ReportBundle run_experiment(const ExperimentConfig& cfg);

}  // namespace shrinkerlab

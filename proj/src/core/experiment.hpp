#pragma once

#include <string>

#include "core/config.hpp"

namespace mutfront {

struct RunOptions {
  std::string out_dir;        // empty: use the config's output dir
  int threads = 0;            // sweep parallelism; <= 0 picks a default
  bool with_timestamp = true; // false: omit generated_at for byte-stable output
};

struct ExperimentOutcome {
  std::string summary_json;  // pretty-printed copy of the main report
};

// Runs the configured experiment and writes its artifacts (CSV + JSON, plus
// snapshots if requested) under the output directory.  Throws Error on any
// failure; a run that ends in blowup is still a success here.
ExperimentOutcome execute_experiment(const ExperimentConfig& cfg, const RunOptions& opt);

// Continues a snapshotted run to its horizon (or t_end_override if not NaN)
// and writes timeseries.csv + report.json like a plain run.
ExperimentOutcome resume_experiment(const std::string& snapshot_path, const RunOptions& opt,
                                    double t_end_override);

// The "run" report document as a string, for callers that hold a finished
// classification rather than a config.
std::string regime_report_json(const ModelParams& params, const Discretization& disc,
                               const RegimeReport& rep, bool with_timestamp);

}  // namespace mutfront

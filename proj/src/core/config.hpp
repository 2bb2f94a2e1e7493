#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "core/analysis.hpp"
#include "core/profiles.hpp"
#include "core/state.hpp"

namespace mutfront {

enum class ExperimentMode { run, compare, certify_fast, sweep, convergence };

const char* mode_name(ExperimentMode m) noexcept;

struct SweepAxis {
  std::string name;  // a ModelParams field, or "u0_amplitude"
  double min = 0, max = 0;
  int count = 0;
};

struct ConvergenceLevel {
  int n_u = 0, n_v = 0;
  double dt = 0;
};

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::run;
  ModelParams params;
  UProfileSpec u0;
  VProfileSpec v0;
  Discretization disc;  // L == 0 until finalize fills the recommendation
  ClassifierConfig classifier;

  bool has_compare = false;  // compare mode: second (larger) run's data
  UProfileSpec u0_b;
  VProfileSpec v0_b;

  double certify_k = 2.0;
  bool certify_allow_any_regime = false;

  std::vector<SweepAxis> axes;
  std::vector<ConvergenceLevel> levels;

  double snapshot_at = std::nan("");
  bool snapshot_final = false;

  std::string out_dir = "out";
};

// Strict parse: unknown keys anywhere are parse errors naming the key, wrong
// schema_version is a schema_mismatch, structurally fine but inconsistent
// content is a validation_error.  Defaults are filled for anything omitted.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Canned parameter sets for the three long-time behaviors:
//   thm33: weak regime, growth above the habitat threshold -> spreading
//   thm41: strong regime, growth above both thresholds -> finite-time blowup
//   thm43: strong regime, small habitat and data -> certified decay
ExperimentConfig preset_config(const std::string& name);

// Applies defaults that need the full picture (derived L), then re-validates.
void finalize_config(ExperimentConfig& cfg);

}  // namespace mutfront

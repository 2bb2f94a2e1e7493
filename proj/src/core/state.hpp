#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "core/params.hpp"

namespace mutfront {

struct FrontState {
  double g = -1.0, h = 1.0;
  double g_dot = 0.0, h_dot = 0.0;
};

// Full solver state at one time level.  u lives on a uniform grid over the
// unit interval image of (g, h) with u.front() == u.back() == 0; v lives on a
// uniform grid over [-L, L].
struct FieldState {
  double t = 0.0;
  FrontState front;
  std::vector<double> u;
  std::vector<double> v;
};

// Per-step scalar diagnostics.  The first eight fields are the timeseries CSV
// columns; the minima are kept for positivity checks only.
struct FrontRecord {
  double t = 0, g = 0, h = 0, g_dot = 0, h_dot = 0;
  double max_u = 0, max_v = 0, mass_u = 0;
  double min_u = 0, min_v = 0;
};

struct Discretization {
  int n_u = 401;                  // nodes across the habitat
  int n_v = 401;                  // nodes across [-L, L]
  double L = 0.0;                 // 0 means: derive from params and t_end
  double dt = 1e-4;               // nominal step; stability caps may shrink it
  double t_end = 1.0;
  double blowup_threshold = 1e8;
  double cfl_safety = 0.8;        // fraction of the advection/reaction limits
  int output_stride = 100;        // full field snapshot every this many steps
  int max_dt_retries = 4;         // halvings before declaring blowup/unstable
};

struct Trajectory {
  ModelParams params;
  Discretization disc;
  std::vector<FrontRecord> records;   // one per accepted step, including t = 0
  std::vector<FieldState> samples;    // strided full states, first and last always
  double initial_gradient_scale = 0;  // max boundary |u_x| at start; velocity yardstick
};

enum class RunStatus { completed, blowup, unstable, domain_exhausted };

inline const char* run_status_name(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup: return "blowup";
    case RunStatus::unstable: return "unstable";
    case RunStatus::domain_exhausted: return "domain_exhausted";
  }
  return "unknown";
}

struct RunResult {
  Trajectory traj;
  RunStatus status = RunStatus::completed;
  double t_blow = std::nan("");  // set when status == blowup
  double blowup_peak = 0.0;      // largest field value seen in failed attempts
  std::string note;
};

}  // namespace mutfront

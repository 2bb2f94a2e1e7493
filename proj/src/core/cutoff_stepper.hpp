#pragma once

#include "core/frontmap.hpp"
#include "core/profiles.hpp"
#include "core/state.hpp"

namespace mutfront {

// State of the fixed-frame stepper: w(t, y) = u(t, x(t, y)) on the reference
// habitat [-b, b], z(t, y) = v(t, x(t, y)) on [-L, L], both on uniform y-grids.
struct CutoffState {
  double t = 0.0;
  FrontState front;
  std::vector<double> w, z;
};

struct CutoffRunResult {
  CutoffState final_state;
  RunStatus status = RunStatus::completed;
  bool transform_ok = true;  // false: fronts left the validity window, run stopped
  double b = 0.0, L = 0.0;
};

// Reference-frame twin of Simulator::run, using the cutoff change of
// variables instead of the affine one.  Exists to cross-check the production
// solver while the fronts stay within b/8 of their starting positions; stops
// with transform_ok = false the moment they leave that window.
CutoffRunResult run_cutoff_frame(const ValidatedParams& p, const InitialData& init,
                                 const Discretization& d);

// Physical positions of the reference nodes of `st` (size n_u).
std::vector<double> cutoff_node_positions(const CutoffRunResult& res);

}  // namespace mutfront

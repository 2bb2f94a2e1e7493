#pragma once

#include <deque>
#include <string>

#include "core/solver.hpp"
#include "core/state.hpp"

namespace mutfront {

// Everything needed to continue a run bit-exactly: parameters, grid, the
// current state, and the retained history window (delay lookups resume from
// the same records the original process held).
struct SnapshotData {
  ModelParams params;
  Discretization disc;
  std::uint64_t step_index = 0;
  double initial_gradient_scale = 0;
  FieldState current;
  FieldState initial;
  std::deque<FieldState> entries;
};

// Fixed-layout binary file, host byte order (see docs/snapshot_format.md).
void write_snapshot(const Simulator& sim, const std::string& path);
SnapshotData read_snapshot(const std::string& path);

// Rebuilds a Simulator from a snapshot.  t_end_override > current time
// replaces disc.t_end; NaN keeps the stored horizon.
Simulator simulator_from_snapshot(SnapshotData snap, double t_end_override);

}  // namespace mutfront

#pragma once

#include <deque>

#include "core/state.hpp"

namespace mutfront {

// Piecewise-linear evaluation of one state's fields at a physical point.
// u is zero outside the habitat; v clamps at the truncation boundary.
double state_u_at(const FieldState& s, double x);
double state_v_at(const FieldState& s, double L, double x);

// Rolling record of past states deep enough to answer both delayed lookups.
// Query times at or before the start resolve to the constant pre-history
// (the initial state); later times interpolate linearly between the two
// bracketing records.
class HistoryBuffer {
public:
  HistoryBuffer() = default;
  HistoryBuffer(double window, double L) : window_(window), L_(L) {}

  // Installs `initial` as both the constant pre-history and the first entry.
  void reset(const FieldState& initial);

  // Restores a previously serialized buffer (resume path).
  void restore(FieldState initial, std::deque<FieldState> entries);

  // Appends a committed state; drops entries that have aged out of the window.
  void push(const FieldState& s);

  // View of the buffer at one query time.  Pointers stay valid until the next
  // push/reset, so consume a slice before committing the step that made it.
  struct Slice {
    const FieldState* lo = nullptr;
    const FieldState* hi = nullptr;
    double w = 0.0;  // time interpolation weight toward hi
    double L = 0.0;

    FrontState front() const;
    double u_phys(double x) const;  // 0 outside the past habitat
    double v_phys(double x) const;  // clamped at the truncation boundary
  };
  Slice at(double t) const;

  const FieldState& initial() const { return initial_; }
  const std::deque<FieldState>& entries() const { return entries_; }
  double window() const noexcept { return window_; }
  double domain_L() const noexcept { return L_; }

private:
  double window_ = 0.0;
  double L_ = 0.0;
  FieldState initial_;
  std::deque<FieldState> entries_;
};

}  // namespace mutfront

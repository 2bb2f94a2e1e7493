#pragma once

#include <cstdint>
#include <utility>

#include "core/history.hpp"
#include "core/profiles.hpp"
#include "core/state.hpp"

namespace mutfront {

enum class StepOutcome { ok, blowup, nonfinite };

namespace detail {

// Backward-Euler diffusion with r = D dt / dx^2.  Dirichlet: endpoints pinned
// at their current values (zero for u).  Neumann: reflecting ghost nodes.
void implicit_diffusion_dirichlet(std::vector<double>& f, double r);
void implicit_diffusion_neumann(std::vector<double>& f, double r);

// One-sided three-point boundary slopes, second order: (df/dxi at 0, at 1).
std::pair<double, double> boundary_slopes(const std::vector<double>& f, double dxi);

}  // namespace detail

void validate_discretization(const Discretization& d, const ValidatedParams& p);

// Recommended truncation half-width: room for the fronts plus a diffusive
// halo for v over the whole run.
double recommended_domain(const ValidatedParams& p, double t_end);

// Time stepper for the coupled system in front-fixed coordinates.
//
// Each step: reaction + mesh-advection for u evaluated at the current level
// (delayed fields read through the history buffer at the same reference
// coordinate; growth terms explicit, self-limiting losses pointwise
// implicit), backward-Euler diffusion on the habitat predicted by the
// current front velocities, the same reaction split / implicit diffusion for
// v on the fixed truncated line, then a trapezoidal front correction.  The
// stored front velocities are recomputed from the final geometry, so every
// record satisfies the front law against its own boundary gradients exactly.
// The implicit losses keep any step size finite and sign-safe, so a genuine
// blowup is detected as growth through blowup_threshold rather than as a
// collapsing stable step size.
class Simulator {
public:
  Simulator(const ValidatedParams& p, const InitialData& init, const Discretization& d);

  // Resume from serialized state.  `entries` are the retained history
  // records; `current` must equal entries.back().
  Simulator(const ValidatedParams& p, const Discretization& d, FieldState current,
            FieldState initial, std::deque<FieldState> entries,
            double initial_gradient_scale, std::uint64_t step_index);

  const FieldState& state() const noexcept { return cur_; }
  const ValidatedParams& params() const noexcept { return p_; }
  const Discretization& disc() const noexcept { return d_; }
  const HistoryBuffer& history() const noexcept { return hist_; }
  double domain_L() const noexcept { return L_; }
  double initial_gradient_scale() const noexcept { return g0_scale_; }
  std::uint64_t step_index() const noexcept { return steps_; }

  // Attempts one step of size dt; commits state and history only on ok.
  StepOutcome try_step(double dt);

  // Largest dt the explicit pieces tolerate right now.
  double stability_cap() const;

  // Advances from the current time to disc().t_end with dt adaptation and
  // bounded retries; fills records/samples along the way.
  RunResult run() { return run_until(d_.t_end); }

  // Same, but stops at min(t_stop, t_end); used to pause for a snapshot.
  RunResult run_until(double t_stop);

  // (u, v) at physical x for the current state; u is 0 outside (g, h).
  std::pair<double, double> sample(double x) const;

  FrontRecord record() const;

private:
  std::pair<double, double> velocities_of(const std::vector<double>& u, double s) const;

  ValidatedParams p_;
  Discretization d_;
  double L_ = 0;
  double dxi_ = 0, dxv_ = 0;
  FieldState cur_;
  HistoryBuffer hist_;
  double g0_scale_ = 0;
  double peak_ = 0;  // largest field magnitude seen, committed or not
  std::uint64_t steps_ = 0;
  std::vector<double> scratch_u_, scratch_v_;
};

// Convenience wrapper: build a Simulator and run it.
RunResult run_simulation(const ValidatedParams& p, const InitialData& init,
                         const Discretization& d);

}  // namespace mutfront

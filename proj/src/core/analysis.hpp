#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/params.hpp"
#include "core/state.hpp"

namespace mutfront {

// Invariant-region ceilings for the weak regime, inflated by m > 1:
//   K1 = m (a1 c2 + a2 c1) / (b1 c2 - b2 c1)
//   K2 = m (a1 b2 + a2 b1) / (b1 c2 - b2 c1)
// Any run whose initial data sits below (K1, K2) stays below forever.
struct BoundsSpec {
  double m = 0, K1 = 0, K2 = 0;
};

// Throws wrong_regime unless the discriminant is positive, wrong_parameter
// unless m > 1.  Requires a1, a2 >= 0 (ceilings would lose meaning otherwise).
BoundsSpec bounds_K(const ValidatedParams& p, double m);

// Principal Dirichlet eigenvalue of -d1 phi'' - drift phi' on (-b, b):
//   d1 (pi / (2 b))^2 + drift^2 / (4 d1).
double first_eigenvalue_shifted(const ValidatedParams& p, double drift);

// Shrinking-envelope certificate for decay with retreat-free fronts.  The
// envelope habitat grows from 2b(k-1) to 2bk while the field under it decays
// like e^{-beta t}; admissibility (b <= b0) makes every inequality hold with
// margin, so a run dominated at t = 0 stays dominated.
class SupersolutionSpec {
public:
  double k = 2.0;
  double b0 = 0.0;      // largest initial half-width the certificate covers
  double beta = 0.0;    // field decay rate
  double gamma = 0.0;   // envelope relaxation rate (equal to beta here)
  double delta = 0.0;   // initial field ceiling
  double v_bar = 0.0;   // flat ceiling for the partner species
  double b = 0.0;
  bool admissible = false;

  double sigma(double t) const;    // right envelope front
  double lambda(double t) const;   // left envelope front (= -sigma)
  double envelope_u(double t, double x) const;
  double envelope_u_max(double t) const;  // delta e^{-beta t}
};

// Throws inadmissible_rate if k <= 1, or if the coefficient signs leave no
// positive decay rate / ceiling to work with.
SupersolutionSpec fast_supersolution(const ValidatedParams& p, double k);

struct Violation {
  double t = 0, x = 0;
  double lhs = 0, rhs = 0;
  std::string what;
};

struct DominationReport {
  bool ok = false;
  std::size_t checked_records = 0;
  std::size_t checked_states = 0;
  std::vector<Violation> violations;  // capped
};

inline constexpr double kDominationRtol = 1e-8;

// Verifies envelope >= solution along a finished trajectory: fronts inside
// [lambda, sigma], max_u under the decaying ceiling, pointwise u under the
// envelope at sampled states, v under v_bar.  Throws precondition_violated
// when the t = 0 state is not dominated (the certificate says nothing then).
DominationReport check_supersolution_dominates(const Trajectory& traj,
                                               const SupersolutionSpec& ss);

struct OrderingReport {
  bool ok = false;
  std::size_t checked_records = 0;
  std::size_t checked_states = 0;
  double worst_gap = 0;  // most negative (B - A) margin seen
  std::vector<Violation> violations;
};

// Checks that run `small` stays below run `big`: habitat contained, u and v
// pointwise smaller, up to tol_scale * (1 + field size).  Throws
// mismatched_runs when params/grids/time levels do not line up.
OrderingReport compare_trajectories(const Trajectory& small, const Trajectory& big,
                                    double tol_scale = 1e-6);

struct DecayFit {
  double log_c0 = 0;     // intercept of the fit at t = 0
  double beta = 0;       // decay rate (positive means decay)
  double r_squared = 1;
  std::size_t n_points = 0;
};

// Least-squares fit of log(max_u) over the trailing half of the records that
// still carry a normal positive max_u (underflowed tails are dropped).
// Throws insufficient_data below 10 usable records.
DecayFit decay_fit(const Trajectory& traj);

enum class Classification { blowup, global_fast, global_slow, undetermined };

inline const char* classification_name(Classification c) noexcept {
  switch (c) {
    case Classification::blowup: return "Blowup";
    case Classification::global_fast: return "GlobalFast";
    case Classification::global_slow: return "GlobalSlow";
    case Classification::undetermined: return "Undetermined";
  }
  return "unknown";
}

struct ClassifierConfig {
  double velocity_fraction = 1e-4;  // of the initial front speed scale
  double tail_fraction = 0.25;      // of the run used for the quiet-front test
  double r2_min = 0.99;
  double slow_front_factor = 3.0;   // h must pass this multiple of b
};

struct RegimeReport {
  Classification classification = Classification::undetermined;
  std::optional<double> t_blow;
  double blowup_peak = 0;
  std::optional<DecayFit> decay;
  FrontRecord final_record;
  RegimeDiscriminant discriminant;
  double threshold_u = 0, threshold_v = 0;  // habitat-limited growth thresholds
  double max_u_overall = 0, max_v_overall = 0;
  double max_abs_g_dot_tail = 0, max_abs_h_dot_tail = 0;
  double quiet_velocity_threshold = 0;
  RunStatus status = RunStatus::completed;
  std::string note;
};

// Trichotomy decision for a finished run: declared blowup wins; otherwise
// near-frozen fronts plus a clean exponential decay of max_u reads as
// GlobalFast; otherwise sustained spreading past slow_front_factor * b reads
// as GlobalSlow; anything else stays undetermined.
RegimeReport classify_regime(const RunResult& rr, const ValidatedParams& p,
                             const ClassifierConfig& cc = {});

}  // namespace mutfront

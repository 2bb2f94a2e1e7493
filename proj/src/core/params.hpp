#pragma once

#include <string>

#include "core/errors.hpp"

namespace mutfront {

// Coefficients of the two-species system on a moving habitat:
//   u_t = d1 u_xx + u (a1 - b1 u + c1 v(t - tau1, x))   on g(t) < x < h(t)
//   v_t = d2 v_xx + v (a2 + b2 u(t - tau2, x) - c2 v)   on the whole line
// with u = 0 at the fronts and the fronts advancing proportionally to the
// boundary gradient of u:  h' = -mu u_x(t, h),  g' = -mu u_x(t, g).
// The habitat starts as (-b, b), and each species carries a constant-in-time
// initial history over its partner's delay window.
struct ModelParams {
  double d1 = 1.0;
  double d2 = 1.0;
  double a1 = 1.0;
  double a2 = 1.0;
  double b1 = 1.0;
  double b2 = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double mu = 1.0;
  double b = 1.0;     // initial habitat half-width
  double tau1 = 0.0;  // delay of v as seen by the u equation
  double tau2 = 0.0;  // delay of u as seen by the v equation
};

// ModelParams that passed validate(). Every solver / analysis entry point
// takes this type so an unvalidated struct cannot reach the numerics.
class ValidatedParams {
public:
  // Requires d1, d2, b1, b2, c1, c2, mu, b > 0; a1, a2 finite; tau1, tau2 >= 0.
  // Throws Error(Errc::invalid_argument) naming the offending field.
  static ValidatedParams validate(const ModelParams& raw);

  const ModelParams& get() const noexcept { return p_; }
  const ModelParams* operator->() const noexcept { return &p_; }

private:
  explicit ValidatedParams(const ModelParams& p) : p_(p) {}
  ModelParams p_;
};

enum class MutualismRegime { weak, strong, critical };

inline const char* regime_name(MutualismRegime r) noexcept {
  switch (r) {
    case MutualismRegime::weak: return "weak";
    case MutualismRegime::strong: return "strong";
    case MutualismRegime::critical: return "critical";
  }
  return "unknown";
}

struct RegimeDiscriminant {
  double value = 0.0;  // b1 c2 - b2 c1
  MutualismRegime label = MutualismRegime::critical;
};

// Sign of b1 c2 - b2 c1 decides whether self-limitation beats the mutual
// feedback loop (weak, > 0) or loses to it (strong, < 0).
RegimeDiscriminant regime_discriminant(const ValidatedParams& p);

// Growth rate below which a habitat of half-width b cannot sustain species i
// on its own: d_i (pi / (2 b))^2.  species is 1 or 2.
double spreading_threshold(const ValidatedParams& p, int species);

}  // namespace mutfront

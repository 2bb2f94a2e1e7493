#pragma once

#include "core/errors.hpp"

namespace mutfront {

// Affine normalization of the moving habitat (g, h) onto (0, 1). This is the
// production coordinate change: valid for any h > g, no cutoffs involved.
double affine_to_unit(double g, double h, double x);
double affine_from_unit(double g, double h, double xi);

struct CutoffEval {
  double f = 0, d1 = 0, d2 = 0, d3 = 0;
};

// Pair of C^3 bump weights used by the fixed-frame change of variables
//   x = y + xi(y) (g + b) + zeta(y) (h - b).
// zeta == 1 within b/8 of +b and == 0 beyond b/2 of it; the transition is a
// septic smoothstep, so three derivatives vanish at both joins and
// max |zeta'| = 35/(6b) < 6/b.  xi mirrors zeta: xi(y) = zeta(-y).  Their
// derivative supports are disjoint, which keeps the two front motions from
// interacting through the map.
class CutoffPair {
public:
  explicit CutoffPair(double b);

  CutoffEval zeta(double y) const;
  CutoffEval xi(double y) const;
  double b() const noexcept { return b_; }

private:
  double b_;
};

// Both fronts within b/8 of where they started; outside this window the
// fixed-frame map loses injectivity guarantees.
bool transform_valid(double g, double h, double b) noexcept;

struct TransformCoefficients {
  double A = 1;  // multiplies the second y-derivative
  double B = 0;  // first-derivative term created by curvature of the map
  double C = 1;  // dy/dx along the map; A == C^2
};

// Coefficients of the transformed diffusion operator at reference point y.
// Throws Errc::transform_out_of_range if the map degenerates there
// (cannot happen while transform_valid holds).
TransformCoefficients transform_coefficients(double g, double h, double y,
                                             const CutoffPair& cp);

// Forward map: physical position of reference point y when the fronts sit at
// (g, h).  Identity for |y| <= b/2, pure translation within b/8 of a front.
double cutoff_to_physical(double g, double h, double y, const CutoffPair& cp);

}  // namespace mutfront

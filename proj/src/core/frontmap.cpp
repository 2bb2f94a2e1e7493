#include "core/frontmap.hpp"

#include <algorithm>
#include <cmath>

namespace mutfront {

double affine_to_unit(double g, double h, double x) {
  if (!(h > g)) raise(Errc::degenerate_interval, "habitat interval is empty");
  return (x - g) / (h - g);
}

double affine_from_unit(double g, double h, double xi) {
  if (!(h > g)) raise(Errc::degenerate_interval, "habitat interval is empty");
  return g + xi * (h - g);
}

namespace {

// Septic smoothstep on [0, 1]: S(0)=0, S(1)=1, S', S'', S''' vanish at both
// ends.  Peak slope S'(1/2) = 35/16.
struct Septic {
  double f, d1, d2, d3;
};

Septic septic(double t) {
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  Septic s;
  s.f = t4 * (35.0 - 84.0 * t + 70.0 * t2 - 20.0 * t3);
  const double omt = 1.0 - t;
  s.d1 = 140.0 * t3 * omt * omt * omt;
  s.d2 = 420.0 * t2 * omt * omt * (1.0 - 2.0 * t);
  s.d3 = 840.0 * t * omt * ((1.0 - 2.0 * t) * (1.0 - 2.0 * t) - t * omt);
  return s;
}

}  // namespace

CutoffPair::CutoffPair(double b) : b_(b) {
  if (!(b > 0.0)) raise(Errc::invalid_argument, "cutoff half-width must be positive");
}

CutoffEval CutoffPair::zeta(double y) const {
  const double s = std::abs(y - b_);
  CutoffEval out;
  if (s <= b_ / 8.0) {
    out.f = 1.0;
    return out;
  }
  if (s >= b_ / 2.0) {
    return out;  // all zeros
  }
  const double scale = 8.0 / (3.0 * b_);           // |d theta / d s|
  const double t = (b_ / 2.0 - s) * scale;         // 1 at inner join, 0 at outer
  const Septic sp = septic(t);
  const double dtdy = -((y > b_) - (y < b_)) * scale;
  out.f = sp.f;
  out.d1 = sp.d1 * dtdy;
  out.d2 = sp.d2 * dtdy * dtdy;
  out.d3 = sp.d3 * dtdy * dtdy * dtdy;
  return out;
}

CutoffEval CutoffPair::xi(double y) const {
  CutoffEval z = zeta(-y);
  z.d1 = -z.d1;
  z.d3 = -z.d3;
  return z;
}

bool transform_valid(double g, double h, double b) noexcept {
  return std::max(std::abs(g + b), std::abs(h - b)) <= b / 8.0;
}

TransformCoefficients transform_coefficients(double g, double h, double y,
                                             const CutoffPair& cp) {
  const double dg = g + cp.b();
  const double dh = h - cp.b();
  const CutoffEval xi = cp.xi(y);
  const CutoffEval ze = cp.zeta(y);
  const double xy = 1.0 + xi.d1 * dg + ze.d1 * dh;  // dx/dy
  if (!(xy > 0.0)) {
    raise(Errc::transform_out_of_range, "fixed-frame map degenerate at this point");
  }
  TransformCoefficients tc;
  tc.C = 1.0 / xy;
  tc.A = tc.C * tc.C;
  tc.B = -(xi.d2 * dg + ze.d2 * dh) * tc.C * tc.C * tc.C;
  return tc;
}

double cutoff_to_physical(double g, double h, double y, const CutoffPair& cp) {
  return y + cp.xi(y).f * (g + cp.b()) + cp.zeta(y).f * (h - cp.b());
}

}  // namespace mutfront

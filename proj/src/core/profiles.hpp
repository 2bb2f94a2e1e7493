#pragma once

#include <cstdint>
#include <vector>

#include "core/params.hpp"

namespace mutfront {

// Monotone cubic Hermite interpolant (Fritsch-Carlson slope limiting).
// Stays inside the local data range, so nonnegative tables stay nonnegative
// up to roundoff.
struct PchipCurve {
  std::vector<double> xs;      // strictly increasing
  std::vector<double> ys;
  std::vector<double> slopes;  // one per node

  static PchipCurve build(std::vector<double> xs, std::vector<double> ys);
  double eval(double x) const;  // clamps to end values outside [xs.front(), xs.back()]
  bool empty() const noexcept { return xs.empty(); }
};

struct UProfileSpec {
  enum class Kind { cosine, parabola, perturbed_cosine, tabulated };
  Kind kind = Kind::cosine;
  double amplitude = 1.0;

  // perturbed_cosine: amplitude * cos(pi x / (2b)) * (1 + sum of seeded
  // low-frequency modes).  mode_scale < 1 keeps the factor positive.
  int modes = 3;
  double mode_scale = 0.2;
  std::uint64_t seed = 0;

  // tabulated: x from -b to b, endpoint values 0
  std::vector<double> xs, values;
};

struct VProfileSpec {
  enum class Kind { constant, gaussian, tabulated };
  Kind kind = Kind::constant;
  double level = 0.0;      // constant / gaussian baseline
  double amplitude = 0.0;  // gaussian bump height (may be negative, floor >= 0)
  double center = 0.0;
  double width = 1.0;

  // tabulated: arbitrary increasing x range; far_field used outside it.
  // NaN far_field means "mean of the two end values".
  std::vector<double> xs, values;
  double far_field = 0.0;
  bool far_field_set = false;
};

// Initial pair (u0 on [-b, b], v0 on the line), checked once at construction:
// u0 continuous, >= 0, vanishing at +-b, positive somewhere; v0 >= 0 and
// bounded with a constant far field.  Both functions double as the constant
// history on their delay windows.
class InitialData {
public:
  static InitialData make(const UProfileSpec& u, const VProfileSpec& v,
                          const ValidatedParams& p);

  double u0(double x) const;  // 0 for |x| >= b
  double v0(double x) const;

  double max_u0() const noexcept { return max_u0_; }
  double max_v0() const noexcept { return max_v0_; }  // sup over the line
  double far_field_v() const noexcept { return far_field_v_; }
  double half_width() const noexcept { return b_; }

  const UProfileSpec& u_spec() const noexcept { return u_; }
  const VProfileSpec& v_spec() const noexcept { return v_; }

private:
  InitialData() = default;

  UProfileSpec u_;
  VProfileSpec v_;
  double b_ = 1.0;
  double far_field_v_ = 0.0;
  double max_u0_ = 0.0;
  double max_v0_ = 0.0;
  std::vector<double> mode_eps_;  // realized perturbation amplitudes
  PchipCurve u_table_, v_table_;
};

}  // namespace mutfront

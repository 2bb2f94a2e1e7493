#include "core/params.hpp"

#include <cmath>

namespace mutfront {

namespace {

void require_positive(double value, const char* field) {
  if (!std::isfinite(value) || value <= 0.0) {
    raise(Errc::invalid_argument,
          std::string(field) + " must be positive and finite, got " +
              std::to_string(value));
  }
}

void require_finite(double value, const char* field) {
  if (!std::isfinite(value)) {
    raise(Errc::invalid_argument, std::string(field) + " must be finite");
  }
}

void require_nonnegative(double value, const char* field) {
  if (!std::isfinite(value) || value < 0.0) {
    raise(Errc::invalid_argument,
          std::string(field) + " must be >= 0 and finite, got " +
              std::to_string(value));
  }
}

}  // namespace

ValidatedParams ValidatedParams::validate(const ModelParams& raw) {
  require_positive(raw.d1, "d1");
  require_positive(raw.d2, "d2");
  require_finite(raw.a1, "a1");
  require_finite(raw.a2, "a2");
  require_positive(raw.b1, "b1");
  require_positive(raw.b2, "b2");
  require_positive(raw.c1, "c1");
  require_positive(raw.c2, "c2");
  require_positive(raw.mu, "mu");
  require_positive(raw.b, "b");
  require_nonnegative(raw.tau1, "tau1");
  require_nonnegative(raw.tau2, "tau2");
  return ValidatedParams(raw);
}

RegimeDiscriminant regime_discriminant(const ValidatedParams& p) {
  RegimeDiscriminant out;
  out.value = p->b1 * p->c2 - p->b2 * p->c1;
  if (out.value > 0.0) {
    out.label = MutualismRegime::weak;
  } else if (out.value < 0.0) {
    out.label = MutualismRegime::strong;
  } else {
    out.label = MutualismRegime::critical;
  }
  return out;
}

double spreading_threshold(const ValidatedParams& p, int species) {
  if (species != 1 && species != 2) {
    raise(Errc::invalid_argument, "species must be 1 or 2");
  }
  const double d = (species == 1) ? p->d1 : p->d2;
  const double q = M_PI / (2.0 * p->b);
  return d * q * q;
}

}  // namespace mutfront

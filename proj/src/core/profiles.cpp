#include "core/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mutfront {

namespace {

double sign_of(double x) { return (x > 0) - (x < 0); }

// Uniform in [-1, 1] from the raw engine output; avoids the
// implementation-defined mapping of std::uniform_real_distribution.
double unit_symmetric(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
  return 2.0 * u - 1.0;
}

}  // namespace

PchipCurve PchipCurve::build(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) {
    raise(Errc::invalid_profile, "tabulated profile needs >= 2 matching x/value entries");
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!(xs[i] < xs[i + 1])) {
      raise(Errc::invalid_profile, "tabulated profile x values must be strictly increasing");
    }
  }
  const std::size_t n = xs.size();
  std::vector<double> h(n - 1), delta(n - 1), m(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = xs[i + 1] - xs[i];
    delta[i] = (ys[i + 1] - ys[i]) / h[i];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sign_of(s) != sign_of(d0)) return 0.0;
    if (sign_of(d0) != sign_of(d1) && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return s;
  };
  if (n == 2) {
    m[0] = m[1] = delta[0];
  } else {
    m[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }
  PchipCurve out;
  out.xs = std::move(xs);
  out.ys = std::move(ys);
  out.slopes = std::move(m);
  return out;
}

double PchipCurve::eval(double x) const {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double hh = xs[i + 1] - xs[i];
  const double t = (x - xs[i]) / hh;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * ys[i] + hh * h10 * slopes[i] + h01 * ys[i + 1] + hh * h11 * slopes[i + 1];
}

InitialData InitialData::make(const UProfileSpec& u, const VProfileSpec& v,
                              const ValidatedParams& p) {
  InitialData out;
  out.u_ = u;
  out.v_ = v;
  out.b_ = p->b;

  if (!std::isfinite(u.amplitude) || u.amplitude <= 0.0) {
    if (u.kind != UProfileSpec::Kind::tabulated) {
      raise(Errc::invalid_profile, "u0 amplitude must be positive");
    }
  }
  switch (u.kind) {
    case UProfileSpec::Kind::cosine:
    case UProfileSpec::Kind::parabola:
      break;
    case UProfileSpec::Kind::perturbed_cosine: {
      if (u.modes < 1 || u.modes > 64) {
        raise(Errc::invalid_profile, "perturbed_cosine modes must be in [1, 64]");
      }
      if (!(u.mode_scale >= 0.0) || u.mode_scale >= 1.0) {
        raise(Errc::invalid_profile, "perturbed_cosine mode_scale must be in [0, 1)");
      }
      std::mt19937_64 rng(u.seed);
      out.mode_eps_.resize(static_cast<std::size_t>(u.modes));
      for (auto& e : out.mode_eps_) {
        e = u.mode_scale * unit_symmetric(rng) / static_cast<double>(u.modes);
      }
      break;
    }
    case UProfileSpec::Kind::tabulated: {
      out.u_table_ = PchipCurve::build(u.xs, u.values);
      const double tol = 1e-9 * (1.0 + p->b);
      if (std::abs(out.u_table_.xs.front() + p->b) > tol ||
          std::abs(out.u_table_.xs.back() - p->b) > tol) {
        raise(Errc::invalid_profile, "tabulated u0 must span exactly [-b, b]");
      }
      double peak = 0.0;
      for (double y : out.u_table_.ys) peak = std::max(peak, std::abs(y));
      if (std::abs(out.u_table_.ys.front()) > 1e-9 * (1.0 + peak) ||
          std::abs(out.u_table_.ys.back()) > 1e-9 * (1.0 + peak)) {
        raise(Errc::invalid_profile, "tabulated u0 must vanish at the initial fronts");
      }
      break;
    }
  }

  switch (v.kind) {
    case VProfileSpec::Kind::constant:
      if (!std::isfinite(v.level) || v.level < 0.0) {
        raise(Errc::invalid_profile, "v0 level must be >= 0");
      }
      out.far_field_v_ = v.level;
      break;
    case VProfileSpec::Kind::gaussian:
      if (!std::isfinite(v.level) || v.level < 0.0 || !std::isfinite(v.amplitude) ||
          !(v.width > 0.0)) {
        raise(Errc::invalid_profile, "gaussian v0 needs level >= 0 and width > 0");
      }
      if (v.level + std::min(v.amplitude, 0.0) < 0.0) {
        raise(Errc::invalid_profile, "gaussian v0 dips below zero");
      }
      out.far_field_v_ = v.level;
      break;
    case VProfileSpec::Kind::tabulated: {
      out.v_table_ = PchipCurve::build(v.xs, v.values);
      out.far_field_v_ = v.far_field_set
                             ? v.far_field
                             : 0.5 * (out.v_table_.ys.front() + out.v_table_.ys.back());
      if (!std::isfinite(out.far_field_v_) || out.far_field_v_ < 0.0) {
        raise(Errc::invalid_profile, "v0 far_field must be >= 0");
      }
      break;
    }
  }

  // Dense sign/support audit; also records the sampled maxima.
  const int samples = 4096;
  double umax = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double x = -p->b + 2.0 * p->b * i / samples;
    const double val = out.u0(x);
    if (!std::isfinite(val) || val < -1e-12 * (1.0 + std::abs(u.amplitude))) {
      raise(Errc::invalid_profile, "u0 must be finite and >= 0 on [-b, b]");
    }
    umax = std::max(umax, val);
  }
  if (!(umax > 0.0)) {
    raise(Errc::invalid_profile, "u0 must be positive somewhere");
  }
  const double edge_tol = 1e-9 * (1.0 + umax);
  if (std::abs(out.u0(-p->b)) > edge_tol || std::abs(out.u0(p->b)) > edge_tol) {
    raise(Errc::invalid_profile, "u0 must vanish at the initial fronts");
  }
  out.max_u0_ = umax;

  double vmax = out.far_field_v_;
  const double vspan = out.v_table_.empty()
                           ? std::max(10.0 * v.width + std::abs(v.center), 4.0 * p->b)
                           : std::max(std::abs(out.v_table_.xs.front()),
                                      std::abs(out.v_table_.xs.back()));
  for (int i = 0; i <= samples; ++i) {
    const double x = -vspan + 2.0 * vspan * i / samples;
    const double val = out.v0(x);
    if (!std::isfinite(val) || val < -1e-12 * (1.0 + vmax)) {
      raise(Errc::invalid_profile, "v0 must be finite and >= 0");
    }
    vmax = std::max(vmax, val);
  }
  out.max_v0_ = vmax;
  return out;
}

double InitialData::u0(double x) const {
  if (std::abs(x) >= b_) return 0.0;
  switch (u_.kind) {
    case UProfileSpec::Kind::cosine:
      return u_.amplitude * std::cos(M_PI * x / (2.0 * b_));
    case UProfileSpec::Kind::parabola:
      return u_.amplitude * (1.0 - (x / b_) * (x / b_));
    case UProfileSpec::Kind::perturbed_cosine: {
      double factor = 1.0;
      for (std::size_t m = 0; m < mode_eps_.size(); ++m) {
        factor += mode_eps_[m] *
                  std::sin((static_cast<double>(m) + 1.0) * M_PI * (x + b_) / (2.0 * b_));
      }
      return u_.amplitude * std::cos(M_PI * x / (2.0 * b_)) * factor;
    }
    case UProfileSpec::Kind::tabulated:
      return u_table_.eval(x);
  }
  return 0.0;
}

double InitialData::v0(double x) const {
  switch (v_.kind) {
    case VProfileSpec::Kind::constant:
      return v_.level;
    case VProfileSpec::Kind::gaussian: {
      const double z = (x - v_.center) / v_.width;
      return v_.level + v_.amplitude * std::exp(-0.5 * z * z);
    }
    case VProfileSpec::Kind::tabulated:
      if (x < v_table_.xs.front() || x > v_table_.xs.back()) return far_field_v_;
      return v_table_.eval(x);
  }
  return far_field_v_;
}

}  // namespace mutfront

#include "core/cutoff_stepper.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "core/solver.hpp"
#include "core/tridiag.hpp"

namespace mutfront {

namespace {

double lerp_uniform(const std::vector<double>& f, double lo, double hi, double x,
                    double outside) {
  if (x <= lo || x >= hi) return outside;
  const double pos = (x - lo) / (hi - lo) * static_cast<double>(f.size() - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(pos), f.size() - 2);
  const double fr = pos - static_cast<double>(i);
  return (1.0 - fr) * f[i] + fr * f[i + 1];
}

double lerp_uniform_clamped(const std::vector<double>& f, double lo, double hi, double x) {
  const double pos = (x - lo) / (hi - lo) * static_cast<double>(f.size() - 1);
  if (pos <= 0.0) return f.front();
  if (pos >= static_cast<double>(f.size() - 1)) return f.back();
  const std::size_t i = static_cast<std::size_t>(pos);
  const double fr = pos - static_cast<double>(i);
  return (1.0 - fr) * f[i] + fr * f[i + 1];
}

// Time ring for delayed lookups in the fixed frame.  Grids never move, so a
// lookup is one time bracket plus a spatial lerp.
struct Ring {
  double window = 0.0;
  CutoffState initial;
  std::deque<CutoffState> entries;

  void reset(const CutoffState& s) {
    initial = s;
    entries.clear();
    entries.push_back(s);
  }
  void push(const CutoffState& s) {
    entries.push_back(s);
    const double horizon = entries.back().t - window;
    while (entries.size() >= 2 && entries[1].t <= horizon) entries.pop_front();
  }
  std::pair<const CutoffState*, const CutoffState*> bracket(double t, double* w) const {
    if (entries.empty() || t <= initial.t) { *w = 0; return {&initial, &initial}; }
    if (t >= entries.back().t) { *w = 0; return {&entries.back(), &entries.back()}; }
    if (t <= entries.front().t) { *w = 0; return {&entries.front(), &entries.front()}; }
    auto it = std::lower_bound(entries.begin(), entries.end(), t,
                               [](const CutoffState& s, double tt) { return s.t < tt; });
    const CutoffState* hi = &*it;
    const CutoffState* lo = &*(it - 1);
    *w = (t - lo->t) / (hi->t - lo->t);
    return {lo, hi};
  }
};

}  // namespace

CutoffRunResult run_cutoff_frame(const ValidatedParams& p, const InitialData& init,
                                 const Discretization& d) {
  validate_discretization(d, p);
  const ModelParams& P = p.get();
  const double b = P.b, L = d.L;
  const CutoffPair cp(b);
  const std::size_t m = static_cast<std::size_t>(d.n_u);
  const std::size_t nz = static_cast<std::size_t>(d.n_v);
  const double dy = 2.0 * b / static_cast<double>(m - 1);
  const double dyz = 2.0 * L / static_cast<double>(nz - 1);

  CutoffState cur;
  cur.t = 0.0;
  cur.front.g = -b;
  cur.front.h = b;
  cur.w.resize(m);
  cur.z.resize(nz);
  for (std::size_t i = 0; i < m; ++i) cur.w[i] = init.u0(-b + static_cast<double>(i) * dy);
  cur.w.front() = cur.w.back() = 0.0;
  for (std::size_t j = 0; j < nz; ++j) cur.z[j] = init.v0(-L + static_cast<double>(j) * dyz);

  auto slopes = [&](const std::vector<double>& f, double step) {
    return detail::boundary_slopes(f, step);
  };
  {
    const auto [sl, sr] = slopes(cur.w, dy);
    cur.front.g_dot = -P.mu * sl;  // C == 1 at the walls, y-slope is the x-slope
    cur.front.h_dot = -P.mu * sr;
  }

  Ring ring;
  ring.window = std::max(P.tau1, P.tau2);
  ring.reset(cur);

  CutoffRunResult out;
  out.b = b;
  out.L = L;

  std::vector<double> wnew(m), znew(nz);
  std::vector<double> lo_band(m - 1), di_band(m), up_band(m - 1), rhs(m);

  const double t_eps = 1e-12 * std::max(1.0, d.t_end);
  while (d.t_end - cur.t > t_eps) {
    double dt = std::min(d.dt, d.t_end - cur.t);
    const double speed = std::max(std::abs(cur.front.g_dot), std::abs(cur.front.h_dot));
    if (speed > 0.0) dt = std::min(dt, d.cfl_safety * dy / speed);
    const double rate = std::max(std::abs(P.a1), std::abs(P.a2));
    if (rate > 0.0) dt = std::min(dt, d.cfl_safety / rate);

    double wt1;
    auto [l1, h1] = ring.bracket(cur.t - P.tau1, &wt1);
    double wt2;
    auto [l2, h2] = ring.bracket(cur.t - P.tau2, &wt2);

    const double g = cur.front.g, h = cur.front.h;
    const double gd = cur.front.g_dot, hd = cur.front.h_dot;

    for (std::size_t i = 1; i + 1 < m; ++i) {
      const double y = -b + static_cast<double>(i) * dy;
      const TransformCoefficients tc = transform_coefficients(g, h, y, cp);
      const double z_del = (1.0 - wt1) * lerp_uniform_clamped(l1->z, -L, L, y) +
                           wt1 * lerp_uniform_clamped(h1->z, -L, L, y);
      const double wi = cur.w[i];
      const double gain = P.a1 + P.c1 * z_del;
      const double mesh_vel = cp.xi(y).f * gd + cp.zeta(y).f * hd;
      const double wy = (cur.w[i + 1] - cur.w[i - 1]) / (2.0 * dy);
      // Same reaction split as the front-fixed stepper: growth explicit,
      // losses pointwise implicit.
      const double numer = wi + dt * ((P.d1 * tc.B + mesh_vel * tc.C) * wy +
                                      std::max(gain, 0.0) * wi);
      const double denom = 1.0 + dt * (std::max(-gain, 0.0) + P.b1 * std::max(wi, 0.0));
      wnew[i] = numer / denom;
    }
    wnew.front() = wnew.back() = 0.0;

    const double g_pred = g + dt * gd, h_pred = h + dt * hd;
    if (!transform_valid(g_pred, h_pred, b)) {
      out.transform_ok = false;
      break;
    }

    // Backward-Euler diffusion with the row-dependent coefficient A(y).
    for (std::size_t i = 1; i + 1 < m; ++i) {
      const double y = -b + static_cast<double>(i) * dy;
      const double r = P.d1 * dt / (dy * dy) *
                       transform_coefficients(g_pred, h_pred, y, cp).A;
      if (i >= 2) lo_band[i - 2] = -r;
      di_band[i - 1] = 1.0 + 2.0 * r;
      if (i + 2 < m) up_band[i - 1] = -r;
      rhs[i - 1] = wnew[i];
    }
    {
      std::vector<double> lo2(lo_band.begin(), lo_band.begin() + (m - 3));
      std::vector<double> di2(di_band.begin(), di_band.begin() + (m - 2));
      std::vector<double> up2(up_band.begin(), up_band.begin() + (m - 3));
      std::vector<double> rhs2(rhs.begin(), rhs.begin() + (m - 2));
      solve_tridiagonal(lo2, di2, up2, rhs2);
      for (std::size_t i = 1; i + 1 < m; ++i) wnew[i] = rhs2[i - 1];
    }

    for (std::size_t j = 0; j < nz; ++j) {
      const double y = -L + static_cast<double>(j) * dyz;
      const double w_del = (1.0 - wt2) * lerp_uniform(l2->w, -b, b, y, 0.0) +
                           wt2 * lerp_uniform(h2->w, -b, b, y, 0.0);
      const double zj = cur.z[j];
      double drift = 0.0;
      if (std::abs(std::abs(y) - b) < b) {  // outside this band the map is identity
        const TransformCoefficients tc = transform_coefficients(g, h, y, cp);
        const double mesh_vel = cp.xi(y).f * gd + cp.zeta(y).f * hd;
        const std::size_t jm = (j == 0) ? 1 : j - 1;
        const std::size_t jp = (j + 1 == nz) ? nz - 2 : j + 1;
        const double zy = (cur.z[jp] - cur.z[jm]) / (2.0 * dyz);
        drift = (P.d2 * tc.B + mesh_vel * tc.C) * zy;
      }
      const double gain = P.a2 + P.b2 * w_del;
      const double numer = zj * (1.0 + dt * std::max(gain, 0.0)) + dt * drift;
      const double denom = 1.0 + dt * (std::max(-gain, 0.0) + P.c2 * std::max(zj, 0.0));
      znew[j] = numer / denom;
    }
    {
      std::vector<double> lo2(nz - 1, 0.0), di2(nz), up2(nz - 1, 0.0), rhs2(znew);
      for (std::size_t j = 0; j < nz; ++j) {
        const double y = -L + static_cast<double>(j) * dyz;
        double A = 1.0;
        if (std::abs(std::abs(y) - b) < b) {
          A = transform_coefficients(g_pred, h_pred, y, cp).A;
        }
        const double r = P.d2 * dt / (dyz * dyz) * A;
        di2[j] = 1.0 + 2.0 * r;
        if (j == 0) {
          up2[0] = -2.0 * r;
        } else if (j + 1 == nz) {
          lo2[j - 1] = -2.0 * r;
        } else {
          lo2[j - 1] = -r;
          up2[j] = -r;
        }
      }
      solve_tridiagonal(lo2, di2, up2, rhs2);
      znew = rhs2;
    }

    bool finite = true;
    for (double x : wnew) finite = finite && std::isfinite(x);
    for (double x : znew) finite = finite && std::isfinite(x);
    if (!finite) {
      out.status = RunStatus::unstable;
      break;
    }

    const auto [sl1, sr1] = slopes(wnew, dy);
    const double gd_pred = -P.mu * sl1, hd_pred = -P.mu * sr1;
    const double g_new = g + 0.5 * dt * (gd + gd_pred);
    const double h_new = h + 0.5 * dt * (hd + hd_pred);
    if (!transform_valid(g_new, h_new, b)) {
      out.transform_ok = false;
      break;
    }

    cur.t += dt;
    cur.front = FrontState{g_new, h_new, gd_pred, hd_pred};
    cur.w = wnew;
    cur.z = znew;
    ring.push(cur);
  }

  out.final_state = cur;
  return out;
}

std::vector<double> cutoff_node_positions(const CutoffRunResult& res) {
  const CutoffPair cp(res.b);
  const std::size_t m = res.final_state.w.size();
  const double dy = 2.0 * res.b / static_cast<double>(m - 1);
  std::vector<double> xs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double y = -res.b + static_cast<double>(i) * dy;
    xs[i] = cutoff_to_physical(res.final_state.front.g, res.final_state.front.h, y, cp);
  }
  return xs;
}

}  // namespace mutfront

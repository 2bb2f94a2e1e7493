#include "core/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/frontmap.hpp"
#include "core/tridiag.hpp"

namespace mutfront {

namespace detail {

void implicit_diffusion_dirichlet(std::vector<double>& f, double r) {
  const std::size_t n = f.size();
  const std::size_t m = n - 2;  // interior unknowns
  static thread_local std::vector<double> lo, di, up, rhs;
  lo.assign(m - 1, -r);
  up.assign(m - 1, -r);
  di.assign(m, 1.0 + 2.0 * r);
  rhs.assign(f.begin() + 1, f.end() - 1);
  rhs.front() += r * f.front();
  rhs.back() += r * f.back();
  solve_tridiagonal(lo, di, up, rhs);
  std::copy(rhs.begin(), rhs.end(), f.begin() + 1);
}

void implicit_diffusion_neumann(std::vector<double>& f, double r) {
  const std::size_t n = f.size();
  static thread_local std::vector<double> lo, di, up, rhs;
  lo.assign(n - 1, -r);
  up.assign(n - 1, -r);
  di.assign(n, 1.0 + 2.0 * r);
  up.front() = -2.0 * r;  // reflected ghost at both walls
  lo.back() = -2.0 * r;
  rhs = f;
  solve_tridiagonal(lo, di, up, rhs);
  f = rhs;
}

std::pair<double, double> boundary_slopes(const std::vector<double>& f, double dxi) {
  const std::size_t n = f.size();
  const double left = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dxi);
  const double right = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dxi);
  return {left, right};
}

}  // namespace detail

void validate_discretization(const Discretization& d, const ValidatedParams& p) {
  if (d.n_u < 5) raise(Errc::invalid_argument, "n_u must be >= 5");
  if (d.n_v < 5) raise(Errc::invalid_argument, "n_v must be >= 5");
  if (!(d.dt > 0.0) || !std::isfinite(d.dt)) raise(Errc::invalid_argument, "dt must be positive");
  if (!(d.t_end > 0.0) || !std::isfinite(d.t_end)) {
    raise(Errc::invalid_argument, "t_end must be positive");
  }
  if (!(d.blowup_threshold > 0.0)) raise(Errc::invalid_argument, "blowup_threshold must be positive");
  if (!(d.cfl_safety > 0.0) || d.cfl_safety > 1.0) {
    raise(Errc::invalid_argument, "cfl_safety must lie in (0, 1]");
  }
  if (d.output_stride < 1) raise(Errc::invalid_argument, "output_stride must be >= 1");
  if (d.max_dt_retries < 0) raise(Errc::invalid_argument, "max_dt_retries must be >= 0");
  if (!(d.L > p->b)) {
    raise(Errc::invalid_argument, "truncation half-width L must exceed the habitat half-width b");
  }
}

double recommended_domain(const ValidatedParams& p, double t_end) {
  return 4.0 * p->b + 4.0 * std::sqrt(std::max(p->d1, p->d2) * std::max(t_end, 1.0));
}

Simulator::Simulator(const ValidatedParams& p, const InitialData& init,
                     const Discretization& d)
    : p_(p), d_(d) {
  validate_discretization(d, p);
  L_ = d.L;
  dxi_ = 1.0 / static_cast<double>(d.n_u - 1);
  dxv_ = 2.0 * L_ / static_cast<double>(d.n_v - 1);

  cur_.t = 0.0;
  cur_.front.g = -p->b;
  cur_.front.h = p->b;
  cur_.u.resize(static_cast<std::size_t>(d.n_u));
  cur_.v.resize(static_cast<std::size_t>(d.n_v));
  for (int i = 0; i < d.n_u; ++i) {
    const double x = affine_from_unit(-p->b, p->b, i * dxi_);
    cur_.u[static_cast<std::size_t>(i)] = init.u0(x);
  }
  cur_.u.front() = 0.0;
  cur_.u.back() = 0.0;
  for (int j = 0; j < d.n_v; ++j) {
    cur_.v[static_cast<std::size_t>(j)] = init.v0(-L_ + j * dxv_);
  }
  const auto [gd, hd] = velocities_of(cur_.u, 2.0 * p->b);
  cur_.front.g_dot = gd;
  cur_.front.h_dot = hd;
  g0_scale_ = std::max(std::abs(gd), std::abs(hd)) / p->mu;

  hist_ = HistoryBuffer(std::max(p->tau1, p->tau2), L_);
  hist_.reset(cur_);
}

Simulator::Simulator(const ValidatedParams& p, const Discretization& d, FieldState current,
                     FieldState initial, std::deque<FieldState> entries,
                     double initial_gradient_scale, std::uint64_t step_index)
    : p_(p), d_(d) {
  validate_discretization(d, p);
  L_ = d.L;
  dxi_ = 1.0 / static_cast<double>(d.n_u - 1);
  dxv_ = 2.0 * L_ / static_cast<double>(d.n_v - 1);
  if (current.u.size() != static_cast<std::size_t>(d.n_u) ||
      current.v.size() != static_cast<std::size_t>(d.n_v)) {
    raise(Errc::invalid_argument, "resumed state does not match the grid sizes");
  }
  cur_ = std::move(current);
  hist_ = HistoryBuffer(std::max(p->tau1, p->tau2), L_);
  hist_.restore(std::move(initial), std::move(entries));
  g0_scale_ = initial_gradient_scale;
  steps_ = step_index;
}

std::pair<double, double> Simulator::velocities_of(const std::vector<double>& u,
                                                   double s) const {
  const auto [sl, sr] = detail::boundary_slopes(u, dxi_);
  return {-p_->mu * sl / s, -p_->mu * sr / s};
}

StepOutcome Simulator::try_step(double dt) {
  const ModelParams& P = p_.get();
  const FieldState& S = cur_;
  const std::size_t m = S.u.size();
  const std::size_t nv = S.v.size();
  const double s = S.front.h - S.front.g;

  const auto sl_v = hist_.at(S.t - P.tau1);  // v as seen by the u equation
  const auto sl_u = hist_.at(S.t - P.tau2);  // u as seen by the v equation
  const FrontState past_front = sl_v.front();

  scratch_u_.resize(m);
  double local_peak = 0.0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double xi = static_cast<double>(i) * dxi_;
    const double ui = S.u[i];
    // Delayed partner density at the position this reference point occupied
    // at the delayed time.
    const double x_del = past_front.g + xi * (past_front.h - past_front.g);
    const double v_del = sl_v.v_phys(x_del);
    const double gain = P.a1 + P.c1 * v_del;
    const double mesh_vel = (1.0 - xi) * S.front.g_dot + xi * S.front.h_dot;
    const double adv = mesh_vel / s * (S.u[i + 1] - S.u[i - 1]) / (2.0 * dxi_);
    // Growth terms explicit, loss terms implicit (pointwise), so the update
    // stays finite and sign-safe for any dt; an exploding field shows up as
    // rapid growth through blowup_threshold instead of a shrinking step size.
    const double numer = ui + dt * (adv + std::max(gain, 0.0) * ui);
    const double denom = 1.0 + dt * (std::max(-gain, 0.0) + P.b1 * std::max(ui, 0.0));
    scratch_u_[i] = numer / denom;
  }
  scratch_u_.front() = 0.0;
  scratch_u_.back() = 0.0;

  const double g_pred = S.front.g + dt * S.front.g_dot;
  const double h_pred = S.front.h + dt * S.front.h_dot;
  const double s_pred = h_pred - g_pred;
  if (!std::isfinite(s_pred) || s_pred <= 1e-9 * P.b) return StepOutcome::nonfinite;

  detail::implicit_diffusion_dirichlet(scratch_u_,
                                       P.d1 * dt / (s_pred * s_pred * dxi_ * dxi_));

  scratch_v_.resize(nv);
  for (std::size_t j = 0; j < nv; ++j) {
    const double x = -L_ + static_cast<double>(j) * dxv_;
    const double u_del = sl_u.u_phys(x);
    const double vj = S.v[j];
    const double gain = P.a2 + P.b2 * u_del;
    const double numer = vj * (1.0 + dt * std::max(gain, 0.0));
    const double denom = 1.0 + dt * (std::max(-gain, 0.0) + P.c2 * std::max(vj, 0.0));
    scratch_v_[j] = numer / denom;
  }
  detail::implicit_diffusion_neumann(scratch_v_, P.d2 * dt / (dxv_ * dxv_));

  bool finite = true;
  for (double x : scratch_u_) {
    if (!std::isfinite(x)) { finite = false; break; }
    local_peak = std::max(local_peak, std::abs(x));
  }
  if (finite) {
    for (double x : scratch_v_) {
      if (!std::isfinite(x)) { finite = false; break; }
      local_peak = std::max(local_peak, std::abs(x));
    }
  }
  peak_ = std::max(peak_, local_peak);
  if (!finite) return StepOutcome::nonfinite;
  if (local_peak > d_.blowup_threshold) return StepOutcome::blowup;

  const auto [gd_pred, hd_pred] = velocities_of(scratch_u_, s_pred);
  const double g_new = S.front.g + 0.5 * dt * (S.front.g_dot + gd_pred);
  const double h_new = S.front.h + 0.5 * dt * (S.front.h_dot + hd_pred);
  const double s_new = h_new - g_new;
  if (!std::isfinite(s_new) || s_new <= 1e-9 * P.b) return StepOutcome::nonfinite;

  const auto [gd, hd] = velocities_of(scratch_u_, s_new);
  if (!std::isfinite(gd) || !std::isfinite(hd)) return StepOutcome::nonfinite;

  cur_.t = S.t + dt;
  cur_.front = FrontState{g_new, h_new, gd, hd};
  cur_.u.swap(scratch_u_);
  cur_.v.swap(scratch_v_);
  hist_.push(cur_);
  ++steps_;
  return StepOutcome::ok;
}

double Simulator::stability_cap() const {
  const ModelParams& P = p_.get();
  double cap = std::numeric_limits<double>::infinity();
  const double s = cur_.front.h - cur_.front.g;
  const double front_speed = std::max(std::abs(cur_.front.g_dot), std::abs(cur_.front.h_dot));
  if (front_speed > 0.0) {
    cap = std::min(cap, d_.cfl_safety * dxi_ * s / front_speed);
  }
  // The reaction no longer limits stability (losses are implicit); the linear
  // rate is kept only as an accuracy guard.  Field-dependent terms must stay
  // out of this cap: otherwise dt shrinks like 1/peak on a blowup run and the
  // threshold is never reached.
  const double rate = std::max(std::abs(P.a1), std::abs(P.a2));
  if (rate > 0.0) cap = std::min(cap, d_.cfl_safety / rate);
  return cap;
}

FrontRecord Simulator::record() const {
  FrontRecord r;
  r.t = cur_.t;
  r.g = cur_.front.g;
  r.h = cur_.front.h;
  r.g_dot = cur_.front.g_dot;
  r.h_dot = cur_.front.h_dot;
  double mxu = 0, mxv = 0;
  double mnu = std::numeric_limits<double>::infinity();
  double mnv = std::numeric_limits<double>::infinity();
  for (double x : cur_.u) { mxu = std::max(mxu, x); mnu = std::min(mnu, x); }
  for (double x : cur_.v) { mxv = std::max(mxv, x); mnv = std::min(mnv, x); }
  r.max_u = mxu;
  r.max_v = mxv;
  r.min_u = mnu;
  r.min_v = mnv;
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < cur_.u.size(); ++i) sum += cur_.u[i];
  r.mass_u = (cur_.front.h - cur_.front.g) * dxi_ * sum;  // trapezoid, zero ends
  return r;
}

RunResult Simulator::run_until(double t_stop) {
  RunResult rr;
  rr.traj.params = p_.get();
  rr.traj.disc = d_;
  rr.traj.records.reserve(1024);
  rr.traj.initial_gradient_scale = g0_scale_;
  rr.traj.records.push_back(record());
  rr.traj.samples.push_back(cur_);
  bool sampled_last = true;

  const double t_end = std::min(t_stop, d_.t_end);
  const double t_eps = 1e-12 * std::max(1.0, t_end);
  const double edge_margin = std::max(2.0 * dxv_, 0.01 * L_);

  while (t_end - cur_.t > t_eps) {
    double dt = std::min(d_.dt, t_end - cur_.t);
    dt = std::min(dt, stability_cap());
    StepOutcome oc = StepOutcome::ok;
    int tries = 0;
    for (;;) {
      oc = try_step(dt);
      if (oc == StepOutcome::ok) break;
      if (++tries > d_.max_dt_retries) break;
      dt *= 0.5;
    }
    if (oc != StepOutcome::ok) {
      if (oc == StepOutcome::blowup) {
        rr.status = RunStatus::blowup;
        rr.t_blow = cur_.t + dt;
        rr.blowup_peak = peak_;
        rr.note = "field magnitude crossed blowup_threshold during the step ending at t_blow";
      } else {
        rr.status = RunStatus::unstable;
        rr.note = "non-finite values persisted through dt reduction";
      }
      if (!sampled_last) rr.traj.samples.push_back(cur_);
      return rr;
    }
    rr.traj.records.push_back(record());
    sampled_last = (steps_ % static_cast<std::uint64_t>(d_.output_stride) == 0);
    if (sampled_last) rr.traj.samples.push_back(cur_);
    if (cur_.front.h > L_ - edge_margin || cur_.front.g < -L_ + edge_margin) {
      rr.status = RunStatus::domain_exhausted;
      rr.note = "a front reached the truncation boundary; rerun with larger L "
                "(recommended >= " +
                std::to_string(recommended_domain(p_, t_end)) + ")";
      if (!sampled_last) rr.traj.samples.push_back(cur_);
      return rr;
    }
  }
  rr.status = RunStatus::completed;
  if (!sampled_last) rr.traj.samples.push_back(cur_);

  // Flag truncation-boundary gradients large enough to pollute v.
  const double v_edge_slope = std::max(std::abs(cur_.v[1] - cur_.v[0]),
                                       std::abs(cur_.v[cur_.v.size() - 1] -
                                                cur_.v[cur_.v.size() - 2])) /
                              dxv_;
  double v_scale = 0.0;
  for (double x : cur_.v) v_scale = std::max(v_scale, std::abs(x));
  if (v_edge_slope > 1e-6 * std::max(1.0, v_scale)) {
    rr.note = "nonzero v gradient at the truncation boundary; consider larger L";
  }
  return rr;
}

std::pair<double, double> Simulator::sample(double x) const {
  double u = 0.0;
  const double g = cur_.front.g, h = cur_.front.h;
  if (x > g && x < h) {
    const double pos = (x - g) / (h - g) * static_cast<double>(cur_.u.size() - 1);
    const std::size_t i = std::min(static_cast<std::size_t>(pos), cur_.u.size() - 2);
    const double f = pos - static_cast<double>(i);
    u = (1.0 - f) * cur_.u[i] + f * cur_.u[i + 1];
  }
  const double pos = (x + L_) / (2.0 * L_) * static_cast<double>(cur_.v.size() - 1);
  double v;
  if (pos <= 0.0) {
    v = cur_.v.front();
  } else if (pos >= static_cast<double>(cur_.v.size() - 1)) {
    v = cur_.v.back();
  } else {
    const std::size_t j = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(j);
    v = (1.0 - f) * cur_.v[j] + f * cur_.v[j + 1];
  }
  return {u, v};
}

RunResult run_simulation(const ValidatedParams& p, const InitialData& init,
                         const Discretization& d) {
  return Simulator(p, init, d).run();
}

}  // namespace mutfront

#include "core/analysis.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "core/history.hpp"

namespace mutfront {

namespace {

constexpr std::size_t kMaxViolations = 32;

void add_violation(std::vector<Violation>& vs, double t, double x, double lhs,
                   double rhs, const char* what) {
  if (vs.size() < kMaxViolations) {
    vs.push_back(Violation{t, x, lhs, rhs, what});
  }
}

}  // namespace

BoundsSpec bounds_K(const ValidatedParams& p, double m) {
  const RegimeDiscriminant rd = regime_discriminant(p);
  if (rd.label != MutualismRegime::weak) {
    raise(Errc::wrong_regime,
          std::string("invariant-region bounds need b1 c2 > b2 c1; regime here is ") +
              regime_name(rd.label));
  }
  if (!(m > 1.0) || !std::isfinite(m)) {
    raise(Errc::wrong_parameter, "bounds inflation m must exceed 1");
  }
  if (p->a1 < 0.0 || p->a2 < 0.0) {
    raise(Errc::wrong_parameter, "bounds need nonnegative growth rates a1, a2");
  }
  BoundsSpec out;
  out.m = m;
  out.K1 = m * (p->a1 * p->c2 + p->a2 * p->c1) / rd.value;
  out.K2 = m * (p->a1 * p->b2 + p->a2 * p->b1) / rd.value;
  return out;
}

double first_eigenvalue_shifted(const ValidatedParams& p, double drift) {
  if (!std::isfinite(drift)) raise(Errc::invalid_argument, "drift must be finite");
  const double q = M_PI / (2.0 * p->b);
  return p->d1 * q * q + drift * drift / (4.0 * p->d1);
}

double SupersolutionSpec::sigma(double t) const {
  return 2.0 * b * (k - std::exp(-gamma * t));
}

double SupersolutionSpec::lambda(double t) const { return -sigma(t); }

double SupersolutionSpec::envelope_u(double t, double x) const {
  const double s = sigma(t);
  if (std::abs(x) >= s) return 0.0;
  return delta * std::exp(-beta * t) * std::cos(M_PI * x / (2.0 * s));
}

double SupersolutionSpec::envelope_u_max(double t) const {
  return delta * std::exp(-beta * t);
}

SupersolutionSpec fast_supersolution(const ValidatedParams& p, double k) {
  if (!(k > 1.0) || !std::isfinite(k)) {
    raise(Errc::inadmissible_rate, "envelope expansion factor k must exceed 1");
  }
  if (!(p->a2 > 0.0)) {
    raise(Errc::inadmissible_rate, "certificate needs a2 > 0 to cap the partner species");
  }
  SupersolutionSpec ss;
  ss.k = k;
  ss.b = p->b;
  ss.v_bar = k * p->a2 / p->c2;
  // Growth the u field sees while v sits at its ceiling.
  const double growth = p->a1 + k * p->a2 * p->c1 / p->c2;
  if (!(growth > 0.0)) {
    raise(Errc::inadmissible_rate, "effective growth rate is nonpositive; no decay margin");
  }
  ss.b0 = (M_PI / (2.0 * k)) * std::sqrt(p->d1 / (8.0 * growth));
  ss.beta = 0.5 * growth;
  ss.gamma = ss.beta;
  const double ratio = p->b / (2.0 * ss.b0);
  const double delta_front =
      (k - 1.0) * p->d1 * M_PI / (2.0 * k * k * p->mu) * ratio * ratio;
  const double delta_partner = (k - 1.0) * p->a2 / (p->b2 * std::exp(ss.beta * p->tau2));
  ss.delta = std::min(delta_front, delta_partner);
  ss.admissible = (p->b <= ss.b0);
  return ss;
}

DominationReport check_supersolution_dominates(const Trajectory& traj,
                                               const SupersolutionSpec& ss) {
  if (traj.records.empty() || traj.samples.empty()) {
    raise(Errc::invalid_argument, "trajectory carries no data");
  }
  DominationReport rep;
  const double L = traj.disc.L;

  // The certificate only speaks about runs it dominates at the start.
  {
    const FieldState& s0 = traj.samples.front();
    const double tol0 = kDominationRtol * (1.0 + ss.delta);
    if (s0.front.g < ss.lambda(s0.t) - tol0 || s0.front.h > ss.sigma(s0.t) + tol0) {
      raise(Errc::precondition_violated, "initial habitat is not inside the envelope");
    }
    const std::size_t n = s0.u.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double x =
          s0.front.g + (s0.front.h - s0.front.g) * static_cast<double>(i) /
                           static_cast<double>(n - 1);
      if (s0.u[i] > ss.envelope_u(s0.t, x) + tol0) {
        raise(Errc::precondition_violated, "initial u pokes above the envelope");
      }
    }
    const double tolv = kDominationRtol * (1.0 + ss.v_bar);
    for (double vj : s0.v) {
      if (vj > ss.v_bar + tolv) {
        raise(Errc::precondition_violated, "initial v exceeds the partner ceiling");
      }
    }
  }

  for (const FrontRecord& r : traj.records) {
    ++rep.checked_records;
    const double tolu = kDominationRtol * (1.0 + ss.envelope_u_max(r.t));
    const double tolv = kDominationRtol * (1.0 + ss.v_bar);
    if (r.g < ss.lambda(r.t) - tolu) {
      add_violation(rep.violations, r.t, r.g, r.g, ss.lambda(r.t), "g below left envelope");
    }
    if (r.h > ss.sigma(r.t) + tolu) {
      add_violation(rep.violations, r.t, r.h, r.h, ss.sigma(r.t), "h above right envelope");
    }
    if (r.max_u > ss.envelope_u_max(r.t) + tolu) {
      add_violation(rep.violations, r.t, 0.0, r.max_u, ss.envelope_u_max(r.t),
                    "max_u above decaying ceiling");
    }
    if (r.max_v > ss.v_bar + tolv) {
      add_violation(rep.violations, r.t, 0.0, r.max_v, ss.v_bar, "max_v above ceiling");
    }
  }

  for (const FieldState& s : traj.samples) {
    ++rep.checked_states;
    const std::size_t n = s.u.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double x =
          s.front.g + (s.front.h - s.front.g) * static_cast<double>(i) /
                          static_cast<double>(n - 1);
      const double env = ss.envelope_u(s.t, x);
      if (s.u[i] > env + kDominationRtol * (1.0 + env)) {
        add_violation(rep.violations, s.t, x, s.u[i], env, "u above envelope");
      }
    }
    const double tolv = kDominationRtol * (1.0 + ss.v_bar);
    for (std::size_t j = 0; j < s.v.size(); ++j) {
      if (s.v[j] > ss.v_bar + tolv) {
        const double x = -L + 2.0 * L * static_cast<double>(j) /
                                  static_cast<double>(s.v.size() - 1);
        add_violation(rep.violations, s.t, x, s.v[j], ss.v_bar, "v above ceiling");
      }
    }
  }

  rep.ok = rep.violations.empty();
  return rep;
}

namespace {

bool params_equal(const ModelParams& a, const ModelParams& b) {
  return a.d1 == b.d1 && a.d2 == b.d2 && a.a1 == b.a1 && a.a2 == b.a2 &&
         a.b1 == b.b1 && a.b2 == b.b2 && a.c1 == b.c1 && a.c2 == b.c2 &&
         a.mu == b.mu && a.b == b.b && a.tau1 == b.tau1 && a.tau2 == b.tau2;
}

bool disc_equal(const Discretization& a, const Discretization& b) {
  return a.n_u == b.n_u && a.n_v == b.n_v && a.L == b.L && a.dt == b.dt &&
         a.t_end == b.t_end && a.output_stride == b.output_stride;
}

}  // namespace

OrderingReport compare_trajectories(const Trajectory& small, const Trajectory& big,
                                    double tol_scale) {
  if (!params_equal(small.params, big.params)) {
    raise(Errc::mismatched_runs, "trajectories use different model parameters");
  }
  if (!disc_equal(small.disc, big.disc)) {
    raise(Errc::mismatched_runs, "trajectories use different grids");
  }
  if (small.records.size() != big.records.size() ||
      small.samples.size() != big.samples.size()) {
    raise(Errc::mismatched_runs,
          "trajectories have different lengths (stability caps may have engaged); "
          "use a smaller nominal dt");
  }

  OrderingReport rep;
  double scale = 1.0;
  for (const auto& r : small.records) scale = std::max(scale, std::max(r.max_u, r.max_v));
  for (const auto& r : big.records) scale = std::max(scale, std::max(r.max_u, r.max_v));
  const double tol = tol_scale * (1.0 + scale);
  auto track = [&rep](double margin) { rep.worst_gap = std::min(rep.worst_gap, margin); };

  for (std::size_t i = 0; i < small.records.size(); ++i) {
    const FrontRecord& ra = small.records[i];
    const FrontRecord& rb = big.records[i];
    if (std::abs(ra.t - rb.t) > 1e-9 * (1.0 + std::abs(ra.t))) {
      raise(Errc::mismatched_runs, "record times diverged between the two runs");
    }
    ++rep.checked_records;
    track(ra.g - rb.g);
    track(rb.h - ra.h);
    if (ra.g < rb.g - tol) {
      add_violation(rep.violations, ra.t, ra.g, ra.g, rb.g, "left front escaped containment");
    }
    if (ra.h > rb.h + tol) {
      add_violation(rep.violations, ra.t, ra.h, ra.h, rb.h, "right front escaped containment");
    }
  }

  const double L = small.disc.L;
  for (std::size_t si = 0; si < small.samples.size(); ++si) {
    const FieldState& sa = small.samples[si];
    const FieldState& sb = big.samples[si];
    if (std::abs(sa.t - sb.t) > 1e-9 * (1.0 + std::abs(sa.t))) {
      raise(Errc::mismatched_runs, "sample times diverged between the two runs");
    }
    ++rep.checked_states;
    const std::size_t n = sa.u.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double x = sa.front.g + (sa.front.h - sa.front.g) * static_cast<double>(i) /
                                        static_cast<double>(n - 1);
      const double ub = state_u_at(sb, x);
      track(ub - sa.u[i]);
      if (sa.u[i] > ub + tol) {
        add_violation(rep.violations, sa.t, x, sa.u[i], ub, "u ordering violated");
      }
    }
    for (std::size_t j = 0; j < sa.v.size(); ++j) {
      track(sb.v[j] - sa.v[j]);
      if (sa.v[j] > sb.v[j] + tol) {
        const double x = -L + 2.0 * L * static_cast<double>(j) /
                                  static_cast<double>(sa.v.size() - 1);
        add_violation(rep.violations, sa.t, x, sa.v[j], sb.v[j], "v ordering violated");
      }
    }
  }

  rep.ok = rep.violations.empty();
  return rep;
}

DecayFit decay_fit(const Trajectory& traj) {
  std::vector<std::pair<double, double>> pts;  // (t, log max_u)
  pts.reserve(traj.records.size());
  for (const FrontRecord& r : traj.records) {
    if (r.max_u >= DBL_MIN) {  // drop zeros and subnormal dregs
      pts.emplace_back(r.t, std::log(r.max_u));
    }
  }
  if (pts.size() < 10) {
    raise(Errc::insufficient_data, "need at least 10 records with positive max_u");
  }
  const std::size_t start = pts.size() / 2;
  const std::size_t n = pts.size() - start;
  double st = 0, sy = 0;
  for (std::size_t i = start; i < pts.size(); ++i) {
    st += pts[i].first;
    sy += pts[i].second;
  }
  const double mt = st / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double stt = 0, sty = 0, syy = 0;
  for (std::size_t i = start; i < pts.size(); ++i) {
    const double dt = pts[i].first - mt;
    const double dy = pts[i].second - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  if (!(stt > 0.0)) {
    raise(Errc::insufficient_data, "fit window has no time extent");
  }
  DecayFit fit;
  const double slope = sty / stt;
  fit.beta = -slope;
  fit.log_c0 = my - slope * mt;
  fit.n_points = n;
  const double ss_res = syy - sty * sty / stt;
  fit.r_squared = (syy > 0.0) ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
  return fit;
}

RegimeReport classify_regime(const RunResult& rr, const ValidatedParams& p,
                             const ClassifierConfig& cc) {
  if (rr.traj.records.empty()) {
    raise(Errc::invalid_argument, "run carries no records");
  }
  RegimeReport rep;
  rep.status = rr.status;
  rep.discriminant = regime_discriminant(p);
  rep.threshold_u = spreading_threshold(p, 1);
  rep.threshold_v = spreading_threshold(p, 2);
  rep.final_record = rr.traj.records.back();
  rep.blowup_peak = rr.blowup_peak;
  for (const FrontRecord& r : rr.traj.records) {
    rep.max_u_overall = std::max(rep.max_u_overall, r.max_u);
    rep.max_v_overall = std::max(rep.max_v_overall, r.max_v);
  }

  if (rr.status == RunStatus::blowup) {
    rep.classification = Classification::blowup;
    rep.t_blow = rr.t_blow;
    return rep;
  }
  if (rr.status == RunStatus::unstable) {
    rep.classification = Classification::undetermined;
    rep.note = "run ended unstable; no classification possible";
    return rep;
  }

  const double t0 = rr.traj.records.front().t;
  const double tN = rr.traj.records.back().t;
  const double tail_start = tN - cc.tail_fraction * (tN - t0);
  for (const FrontRecord& r : rr.traj.records) {
    if (r.t >= tail_start) {
      rep.max_abs_g_dot_tail = std::max(rep.max_abs_g_dot_tail, std::abs(r.g_dot));
      rep.max_abs_h_dot_tail = std::max(rep.max_abs_h_dot_tail, std::abs(r.h_dot));
    }
  }
  // Velocity yardstick: the initial front speed, with a shape-independent
  // fallback when the initial profile happens to have flat edges.
  const double grad_scale = std::max(rr.traj.initial_gradient_scale,
                                     rr.traj.records.front().max_u / p->b);
  rep.quiet_velocity_threshold = cc.velocity_fraction * p->mu * grad_scale;
  const bool quiet =
      std::max(rep.max_abs_g_dot_tail, rep.max_abs_h_dot_tail) < rep.quiet_velocity_threshold;

  bool decays = false;
  try {
    DecayFit fit = decay_fit(rr.traj);
    rep.decay = fit;
    decays = fit.beta > 0.0 && fit.r_squared >= cc.r2_min;
  } catch (const Error&) {
    // Field died so fast no fit window survives; treat max_u == 0 at the end
    // as decayed.
    decays = rep.final_record.max_u == 0.0;
  }

  if (quiet && decays) {
    rep.classification = Classification::global_fast;
    return rep;
  }
  if (rep.final_record.h >= cc.slow_front_factor * p->b && rep.final_record.h_dot > 0.0) {
    rep.classification = Classification::global_slow;
    if (rr.status == RunStatus::domain_exhausted) {
      rep.note = "fronts reached the truncation boundary while still spreading";
    }
    return rep;
  }
  rep.classification = Classification::undetermined;
  rep.note = quiet ? "fronts quiet but max_u decay is not cleanly exponential"
                   : "fronts neither quiet nor past the spreading mark";
  return rep;
}

}  // namespace mutfront

#include "core/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <thread>

#include <json.hpp>

#include "core/csv_io.hpp"
#include "core/snapshot.hpp"
#include "core/version.hpp"

namespace mutfront {

using nlohmann::ordered_json;

namespace {

namespace fs = std::filesystem;

std::string iso_utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json tool_block(const RunOptions& opt) {
  ordered_json j;
  j["name"] = "mutfront";
  j["version"] = kVersion;
  if (opt.with_timestamp) j["generated_at"] = iso_utc_now();
  return j;
}

ordered_json params_block(const ModelParams& p) {
  ordered_json j;
  j["d1"] = p.d1; j["d2"] = p.d2;
  j["a1"] = p.a1; j["a2"] = p.a2;
  j["b1"] = p.b1; j["b2"] = p.b2;
  j["c1"] = p.c1; j["c2"] = p.c2;
  j["mu"] = p.mu; j["b"] = p.b;
  j["tau1"] = p.tau1; j["tau2"] = p.tau2;
  return j;
}

ordered_json disc_block(const Discretization& d) {
  ordered_json j;
  j["n_u"] = d.n_u;
  j["n_v"] = d.n_v;
  j["L"] = d.L;
  j["dt"] = d.dt;
  j["t_end"] = d.t_end;
  j["blowup_threshold"] = d.blowup_threshold;
  j["cfl_safety"] = d.cfl_safety;
  j["output_stride"] = d.output_stride;
  j["max_dt_retries"] = d.max_dt_retries;
  return j;
}

ordered_json regime_block(const RegimeReport& rep) {
  ordered_json j;
  j["classification"] = classification_name(rep.classification);
  if (rep.t_blow) {
    j["t_blow"] = *rep.t_blow;
    j["blowup_peak"] = rep.blowup_peak;
  }
  if (rep.decay) {
    ordered_json f;
    f["beta"] = rep.decay->beta;
    f["log_c0"] = rep.decay->log_c0;
    f["r_squared"] = rep.decay->r_squared;
    f["n_points"] = rep.decay->n_points;
    j["decay_fit"] = f;
  }
  ordered_json fin;
  fin["t"] = rep.final_record.t;
  fin["g"] = rep.final_record.g;
  fin["h"] = rep.final_record.h;
  fin["g_dot"] = rep.final_record.g_dot;
  fin["h_dot"] = rep.final_record.h_dot;
  fin["max_u"] = rep.final_record.max_u;
  fin["max_v"] = rep.final_record.max_v;
  fin["mass_u"] = rep.final_record.mass_u;
  j["final"] = fin;
  ordered_json diag;
  diag["discriminant"] = rep.discriminant.value;
  diag["regime"] = regime_name(rep.discriminant.label);
  diag["threshold_u"] = rep.threshold_u;
  diag["threshold_v"] = rep.threshold_v;
  diag["max_u_overall"] = rep.max_u_overall;
  diag["max_v_overall"] = rep.max_v_overall;
  diag["tail_max_abs_g_dot"] = rep.max_abs_g_dot_tail;
  diag["tail_max_abs_h_dot"] = rep.max_abs_h_dot_tail;
  diag["quiet_velocity_threshold"] = rep.quiet_velocity_threshold;
  diag["run_status"] = run_status_name(rep.status);
  if (!rep.note.empty()) diag["note"] = rep.note;
  j["diagnostics"] = diag;
  return j;
}

ordered_json violations_block(const std::vector<Violation>& vs) {
  ordered_json arr = ordered_json::array();
  for (const Violation& v : vs) {
    ordered_json e;
    e["t"] = v.t;
    e["x"] = v.x;
    e["lhs"] = v.lhs;
    e["rhs"] = v.rhs;
    e["what"] = v.what;
    arr.push_back(e);
  }
  return arr;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) raise(Errc::io_error, "cannot create output directory " + dir + ": " + ec.message());
}

std::string resolve_out_dir(const ExperimentConfig& cfg, const RunOptions& opt) {
  const std::string dir = opt.out_dir.empty() ? cfg.out_dir : opt.out_dir;
  ensure_dir(dir);
  return dir;
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void append_run(RunResult& acc, RunResult&& next) {
  // next begins with a record/sample of the state acc ended on.
  auto& r = next.traj.records;
  acc.traj.records.insert(acc.traj.records.end(),
                          r.begin() + (r.empty() ? 0 : 1), r.end());
  auto& s = next.traj.samples;
  acc.traj.samples.insert(acc.traj.samples.end(),
                          s.begin() + (s.empty() ? 0 : 1), s.end());
  acc.status = next.status;
  acc.t_blow = next.t_blow;
  acc.blowup_peak = std::max(acc.blowup_peak, next.blowup_peak);
  if (!next.note.empty()) acc.note = next.note;
}

// Runs one simulation, honoring a mid-run snapshot request.
RunResult run_with_snapshot(const ExperimentConfig& cfg, const ValidatedParams& p,
                            const InitialData& init, const std::string& dir) {
  Simulator sim(p, init, cfg.disc);
  const bool want_mid = !std::isnan(cfg.snapshot_at);
  if (want_mid && !(cfg.snapshot_at > 0.0 && cfg.snapshot_at < cfg.disc.t_end)) {
    raise(Errc::validation_error, "snapshot.at_t must lie inside (0, t_end)");
  }
  RunResult rr;
  if (want_mid) {
    rr = sim.run_until(cfg.snapshot_at);
    if (rr.status == RunStatus::completed) {
      write_snapshot(sim, join(dir, "snapshot.bin"));
      append_run(rr, sim.run());
    }
  } else {
    rr = sim.run();
  }
  if (cfg.snapshot_final && rr.status == RunStatus::completed) {
    write_snapshot(sim, join(dir, "snapshot_final.bin"));
  }
  return rr;
}

ExperimentOutcome do_run(const ExperimentConfig& cfg, const RunOptions& opt) {
  const std::string dir = resolve_out_dir(cfg, opt);
  const ValidatedParams p = ValidatedParams::validate(cfg.params);
  const InitialData init = InitialData::make(cfg.u0, cfg.v0, p);
  const RunResult rr = run_with_snapshot(cfg, p, init, dir);
  const RegimeReport rep = classify_regime(rr, p, cfg.classifier);

  write_timeseries_csv(rr.traj.records, join(dir, "timeseries.csv"));

  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = tool_block(opt);
  j["kind"] = "run";
  j["params"] = params_block(cfg.params);
  j["disc"] = disc_block(cfg.disc);
  j.update(regime_block(rep));
  const std::string text = j.dump(2) + "\n";
  write_text_file(join(dir, "report.json"), text);
  return ExperimentOutcome{text};
}

ExperimentOutcome do_compare(const ExperimentConfig& cfg, const RunOptions& opt) {
  const std::string dir = resolve_out_dir(cfg, opt);
  const ValidatedParams p = ValidatedParams::validate(cfg.params);
  const InitialData init_a = InitialData::make(cfg.u0, cfg.v0, p);
  const InitialData init_b = InitialData::make(cfg.u0_b, cfg.v0_b, p);

  // The ordering statement needs ordered starting data; check before burning
  // compute on two runs.
  {
    const int probes = 512;
    for (int i = 0; i <= probes; ++i) {
      const double x = -p->b + 2.0 * p->b * i / probes;
      if (init_a.u0(x) > init_b.u0(x) + 1e-12 * (1.0 + init_b.max_u0())) {
        raise(Errc::precondition_violated,
              "compare needs u0 <= compare.u0 everywhere; violated at x = " +
                  std::to_string(x));
      }
    }
    for (int i = 0; i <= probes; ++i) {
      const double x = -cfg.disc.L + 2.0 * cfg.disc.L * i / probes;
      if (init_a.v0(x) > init_b.v0(x) + 1e-12 * (1.0 + init_b.max_v0())) {
        raise(Errc::precondition_violated,
              "compare needs v0 <= compare.v0 everywhere; violated at x = " +
                  std::to_string(x));
      }
    }
  }

  const RunResult ra = run_simulation(p, init_a, cfg.disc);
  const RunResult rb = run_simulation(p, init_b, cfg.disc);
  write_timeseries_csv(ra.traj.records, join(dir, "timeseries_a.csv"));
  write_timeseries_csv(rb.traj.records, join(dir, "timeseries_b.csv"));

  const OrderingReport ord = compare_trajectories(ra.traj, rb.traj);

  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = tool_block(opt);
  j["kind"] = "compare";
  j["params"] = params_block(cfg.params);
  j["disc"] = disc_block(cfg.disc);
  j["ordered"] = ord.ok;
  j["checked_records"] = ord.checked_records;
  j["checked_states"] = ord.checked_states;
  j["worst_gap"] = ord.worst_gap;
  j["violations"] = violations_block(ord.violations);
  j["run_status_a"] = run_status_name(ra.status);
  j["run_status_b"] = run_status_name(rb.status);
  const std::string text = j.dump(2) + "\n";
  write_text_file(join(dir, "ordering.json"), text);
  return ExperimentOutcome{text};
}

ExperimentOutcome do_certify(const ExperimentConfig& cfg, const RunOptions& opt) {
  const std::string dir = resolve_out_dir(cfg, opt);
  const ValidatedParams p = ValidatedParams::validate(cfg.params);
  const InitialData init = InitialData::make(cfg.u0, cfg.v0, p);
  const SupersolutionSpec ss = fast_supersolution(p, cfg.certify_k);

  const RunResult rr = run_with_snapshot(cfg, p, init, dir);
  const RegimeReport rep = classify_regime(rr, p, cfg.classifier);
  write_timeseries_csv(rr.traj.records, join(dir, "timeseries.csv"));

  DominationReport dom;
  std::string precondition_failure;
  try {
    dom = check_supersolution_dominates(rr.traj, ss);
  } catch (const Error& e) {
    if (e.code() != Errc::precondition_violated) throw;
    precondition_failure = e.what();
  }

  const bool certified = precondition_failure.empty() && ss.admissible && dom.ok &&
                         rep.classification == Classification::global_fast;

  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = tool_block(opt);
  j["kind"] = "certify-fast";
  j["params"] = params_block(cfg.params);
  j["disc"] = disc_block(cfg.disc);
  ordered_json cert;
  cert["k"] = ss.k;
  cert["b0"] = ss.b0;
  cert["admissible"] = ss.admissible;
  cert["beta"] = ss.beta;
  cert["gamma"] = ss.gamma;
  cert["delta"] = ss.delta;
  cert["v_bar"] = ss.v_bar;
  cert["sigma0"] = ss.sigma(0.0);
  j["certificate"] = cert;
  if (!precondition_failure.empty()) {
    j["precondition_failure"] = precondition_failure;
  } else {
    j["domination_ok"] = dom.ok;
    j["checked_records"] = dom.checked_records;
    j["checked_states"] = dom.checked_states;
    j["violations"] = violations_block(dom.violations);
  }
  j["certified"] = certified;
  j.update(regime_block(rep));
  const std::string text = j.dump(2) + "\n";
  write_text_file(join(dir, "certificate.json"), text);
  return ExperimentOutcome{text};
}

struct SweepCell {
  std::vector<double> coords;
  ModelParams params;
  UProfileSpec u0;
};

void apply_axis(const SweepAxis& ax, double value, ModelParams& p, UProfileSpec& u0) {
  if (ax.name == "d1") p.d1 = value;
  else if (ax.name == "d2") p.d2 = value;
  else if (ax.name == "a1") p.a1 = value;
  else if (ax.name == "a2") p.a2 = value;
  else if (ax.name == "b1") p.b1 = value;
  else if (ax.name == "b2") p.b2 = value;
  else if (ax.name == "c1") p.c1 = value;
  else if (ax.name == "c2") p.c2 = value;
  else if (ax.name == "mu") p.mu = value;
  else if (ax.name == "b") p.b = value;
  else if (ax.name == "tau1") p.tau1 = value;
  else if (ax.name == "tau2") p.tau2 = value;
  else if (ax.name == "u0_amplitude") u0.amplitude = value;
  else raise(Errc::internal, "unchecked sweep axis slipped through validation");
}

std::vector<double> axis_values(const SweepAxis& ax) {
  std::vector<double> vals(static_cast<std::size_t>(ax.count));
  if (ax.count == 1) {
    vals[0] = ax.min;
    return vals;
  }
  for (int i = 0; i < ax.count; ++i) {
    vals[static_cast<std::size_t>(i)] =
        ax.min + (ax.max - ax.min) * static_cast<double>(i) /
                     static_cast<double>(ax.count - 1);
  }
  return vals;
}

ExperimentOutcome do_sweep(const ExperimentConfig& cfg, const RunOptions& opt) {
  const std::string dir = resolve_out_dir(cfg, opt);

  std::vector<SweepCell> cells;
  const std::vector<double> v1 = axis_values(cfg.axes[0]);
  if (cfg.axes.size() == 1) {
    for (double a : v1) {
      SweepCell c{{a}, cfg.params, cfg.u0};
      apply_axis(cfg.axes[0], a, c.params, c.u0);
      cells.push_back(std::move(c));
    }
  } else {
    const std::vector<double> v2 = axis_values(cfg.axes[1]);
    for (double a : v1) {
      for (double b : v2) {
        SweepCell c{{a, b}, cfg.params, cfg.u0};
        apply_axis(cfg.axes[0], a, c.params, c.u0);
        apply_axis(cfg.axes[1], b, c.params, c.u0);
        cells.push_back(std::move(c));
      }
    }
  }

  Discretization cell_disc = cfg.disc;
  cell_disc.output_stride = 1 << 30;  // classification needs records only

  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      SweepRow& row = rows[i];
      row.coords = cells[i].coords;
      try {
        const ValidatedParams p = ValidatedParams::validate(cells[i].params);
        const InitialData init = InitialData::make(cells[i].u0, cfg.v0, p);
        const RunResult rr = run_simulation(p, init, cell_disc);
        const RegimeReport rep = classify_regime(rr, p, cfg.classifier);
        row.classification = classification_name(rep.classification);
        if (rep.t_blow) row.t_blow = *rep.t_blow;
        if (rep.decay) row.beta_fit = rep.decay->beta;
        row.h_final = rep.final_record.h;
      } catch (const std::exception&) {
        row.classification = "Error";
      }
    }
  };

  int nthreads = opt.threads;
  if (nthreads <= 0) {
    nthreads = static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    nthreads = std::min(nthreads, 8);
  }
  nthreads = static_cast<int>(
      std::min(static_cast<std::size_t>(nthreads), cells.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  std::vector<std::string> axis_names;
  for (const SweepAxis& ax : cfg.axes) axis_names.push_back(ax.name);
  write_sweep_csv(axis_names, rows, join(dir, "sweep.csv"));

  ordered_json counts;
  for (const SweepRow& r : rows) {
    const auto it = counts.find(r.classification);
    counts[r.classification] = (it == counts.end() ? 0 : it->get<int>()) + 1;
  }
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = tool_block(opt);
  j["kind"] = "sweep";
  j["params"] = params_block(cfg.params);
  j["disc"] = disc_block(cfg.disc);
  ordered_json axes = ordered_json::array();
  for (const SweepAxis& ax : cfg.axes) {
    ordered_json a;
    a["param"] = ax.name;
    a["min"] = ax.min;
    a["max"] = ax.max;
    a["count"] = ax.count;
    axes.push_back(a);
  }
  j["axes"] = axes;
  j["cells"] = rows.size();
  j["classification_counts"] = counts;
  const std::string text = j.dump(2) + "\n";
  write_text_file(join(dir, "sweep.json"), text);
  return ExperimentOutcome{text};
}

ExperimentOutcome do_convergence(const ExperimentConfig& cfg, const RunOptions& opt) {
  const std::string dir = resolve_out_dir(cfg, opt);
  const ValidatedParams p = ValidatedParams::validate(cfg.params);
  const InitialData init = InitialData::make(cfg.u0, cfg.v0, p);

  std::vector<RunResult> runs;
  runs.reserve(cfg.levels.size());
  for (const ConvergenceLevel& l : cfg.levels) {
    Discretization d = cfg.disc;
    d.n_u = l.n_u;
    d.n_v = l.n_v;
    d.dt = l.dt;
    d.output_stride = 1 << 30;
    runs.push_back(run_simulation(p, init, d));
    if (runs.back().status != RunStatus::completed) {
      raise(Errc::unstable, "convergence level did not complete: " +
                                std::string(run_status_name(runs.back().status)));
    }
  }

  const FieldState& ref = runs.back().traj.samples.back();
  const double L = cfg.disc.L;
  const int probes = 101;
  auto level_errors = [&](const RunResult& rr) {
    const FieldState& s = rr.traj.samples.back();
    double eu = 0.0;
    for (int i = 0; i < probes; ++i) {
      const double x = ref.front.g + (ref.front.h - ref.front.g) *
                                         static_cast<double>(i) /
                                         static_cast<double>(probes - 1);
      eu = std::max(eu, std::abs(state_u_at(s, x) - state_u_at(ref, x)));
      eu = std::max(eu, std::abs(state_v_at(s, L, x) - state_v_at(ref, L, x)));
    }
    const double ef = std::max(std::abs(s.front.g - ref.front.g),
                               std::abs(s.front.h - ref.front.h));
    return std::pair<double, double>{eu, ef};
  };

  std::vector<ConvergenceRow> rows;
  for (std::size_t l = 0; l < cfg.levels.size(); ++l) {
    ConvergenceRow row;
    row.level = static_cast<int>(l);
    row.dx = 2.0 * p->b / static_cast<double>(cfg.levels[l].n_u - 1);
    row.dt = cfg.levels[l].dt;
    if (l + 1 == cfg.levels.size()) {
      row.err_u = 0.0;
      row.err_front = 0.0;
    } else {
      const auto [eu, ef] = level_errors(runs[l]);
      row.err_u = eu;
      row.err_front = ef;
    }
    if (l > 0) {
      const ConvergenceRow& prev = rows.back();
      if (prev.err_u > 0 && row.err_u > 0 && prev.dx != row.dx) {
        row.order_u = std::log(prev.err_u / row.err_u) / std::log(prev.dx / row.dx);
      }
      if (prev.err_front > 0 && row.err_front > 0 && prev.dt != row.dt) {
        row.order_front =
            std::log(prev.err_front / row.err_front) / std::log(prev.dt / row.dt);
      }
    }
    rows.push_back(row);
  }
  write_convergence_csv(rows, join(dir, "convergence.csv"));

  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = tool_block(opt);
  j["kind"] = "convergence";
  j["params"] = params_block(cfg.params);
  j["disc"] = disc_block(cfg.disc);
  ordered_json lv = ordered_json::array();
  for (std::size_t l = 0; l < rows.size(); ++l) {
    ordered_json e;
    e["level"] = rows[l].level;
    e["n_u"] = cfg.levels[l].n_u;
    e["dx"] = rows[l].dx;
    e["dt"] = rows[l].dt;
    e["err_u"] = rows[l].err_u;
    e["err_front"] = rows[l].err_front;
    if (!std::isnan(rows[l].order_u)) e["order_u"] = rows[l].order_u;
    if (!std::isnan(rows[l].order_front)) e["order_front"] = rows[l].order_front;
    lv.push_back(e);
  }
  j["levels"] = lv;
  const std::string text = j.dump(2) + "\n";
  write_text_file(join(dir, "convergence.json"), text);
  return ExperimentOutcome{text};
}

}  // namespace

std::string regime_report_json(const ModelParams& params, const Discretization& disc,
                               const RegimeReport& rep, bool with_timestamp) {
  RunOptions opt;
  opt.with_timestamp = with_timestamp;
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = tool_block(opt);
  j["kind"] = "run";
  j["params"] = params_block(params);
  j["disc"] = disc_block(disc);
  j.update(regime_block(rep));
  return j.dump(2) + "\n";
}

ExperimentOutcome execute_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
  switch (cfg.mode) {
    case ExperimentMode::run: return do_run(cfg, opt);
    case ExperimentMode::compare: return do_compare(cfg, opt);
    case ExperimentMode::certify_fast: return do_certify(cfg, opt);
    case ExperimentMode::sweep: return do_sweep(cfg, opt);
    case ExperimentMode::convergence: return do_convergence(cfg, opt);
  }
  raise(Errc::internal, "unhandled experiment mode");
}

ExperimentOutcome resume_experiment(const std::string& snapshot_path, const RunOptions& opt,
                                    double t_end_override) {
  SnapshotData snap = read_snapshot(snapshot_path);
  const ModelParams params = snap.params;
  Simulator sim = simulator_from_snapshot(std::move(snap), t_end_override);
  const ValidatedParams p = sim.params();
  const Discretization disc = sim.disc();

  const std::string dir = opt.out_dir.empty() ? std::string("out") : opt.out_dir;
  ensure_dir(dir);

  RunResult rr = sim.run();
  const RegimeReport rep = classify_regime(rr, p, ClassifierConfig{});
  write_timeseries_csv(rr.traj.records, join(dir, "timeseries.csv"));

  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = tool_block(opt);
  j["kind"] = "resume";
  j["params"] = params_block(params);
  j["disc"] = disc_block(disc);
  j["resumed_from_t"] = rr.traj.records.front().t;
  j.update(regime_block(rep));
  const std::string text = j.dump(2) + "\n";
  write_text_file(join(dir, "report.json"), text);
  return ExperimentOutcome{text};
}

}  // namespace mutfront

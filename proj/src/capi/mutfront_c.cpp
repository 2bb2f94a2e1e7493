#include "mutfront.h"

#include <cstring>
#include <new>
#include <string>

#include "core/analysis.hpp"
#include "core/config.hpp"
#include "core/csv_io.hpp"
#include "core/experiment.hpp"
#include "core/snapshot.hpp"
#include "core/version.hpp"

using namespace mutfront;

namespace {

thread_local std::string g_last_error;

mf_status status_of(Errc c) {
  switch (c) {
    case Errc::invalid_argument:
    case Errc::invalid_profile:
    case Errc::degenerate_interval:
    case Errc::transform_out_of_range:
    case Errc::precondition_violated:
    case Errc::mismatched_runs:
    case Errc::insufficient_data:
      return MF_ERR_INVALID;
    case Errc::wrong_regime:
    case Errc::wrong_parameter:
    case Errc::inadmissible_rate:
      return MF_ERR_REGIME;
    case Errc::parse_error:
      return MF_ERR_PARSE;
    case Errc::schema_mismatch:
      return MF_ERR_SCHEMA;
    case Errc::validation_error:
      return MF_ERR_VALIDATION;
    case Errc::io_error:
      return MF_ERR_IO;
    case Errc::unstable:
      return MF_ERR_UNSTABLE;
    case Errc::internal:
      return MF_ERR_INTERNAL;
  }
  return MF_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes + thread-local message.
template <typename Fn>
mf_status guarded(Fn&& fn) {
  try {
    fn();
    return MF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MF_ERR_NOMEM;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MF_ERR_INTERNAL;
  }
}

ModelParams to_cpp(const mf_params& p) {
  return ModelParams{p.d1, p.d2, p.a1, p.a2, p.b1, p.b2,
                     p.c1, p.c2, p.mu, p.b,  p.tau1, p.tau2};
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

mf_status require(bool ok, const char* msg) {
  if (ok) return MF_OK;
  g_last_error = msg;
  return MF_ERR_INVALID;
}

}  // namespace

struct mf_config {
  ExperimentConfig cfg;
};

struct mf_sim {
  ExperimentConfig cfg;
  Simulator sim;
};

struct mf_result {
  ModelParams params;
  Discretization disc;
  std::vector<FrontRecord> records;
  RegimeReport report;
};

extern "C" {

const char* mf_version(void) { return kVersion; }

const char* mf_status_name(mf_status s) {
  switch (s) {
    case MF_OK: return "ok";
    case MF_ERR_INVALID: return "invalid";
    case MF_ERR_PARSE: return "parse_error";
    case MF_ERR_SCHEMA: return "schema_mismatch";
    case MF_ERR_VALIDATION: return "validation_error";
    case MF_ERR_IO: return "io_error";
    case MF_ERR_UNSTABLE: return "unstable";
    case MF_ERR_REGIME: return "wrong_regime";
    case MF_ERR_NOMEM: return "out_of_memory";
    case MF_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* mf_last_error(void) { return g_last_error.c_str(); }

mf_status mf_params_validate(const mf_params* p) {
  if (mf_status s = require(p != nullptr, "p is NULL")) return s;
  return guarded([&] { (void)ValidatedParams::validate(to_cpp(*p)); });
}

mf_status mf_regime_discriminant(const mf_params* p, double* value, int* label) {
  if (mf_status s = require(p && value && label, "NULL argument")) return s;
  return guarded([&] {
    const ValidatedParams vp = ValidatedParams::validate(to_cpp(*p));
    const RegimeDiscriminant rd = regime_discriminant(vp);
    *value = rd.value;
    *label = rd.label == MutualismRegime::weak ? 1
             : rd.label == MutualismRegime::strong ? -1
                                                   : 0;
  });
}

mf_status mf_spreading_threshold(const mf_params* p, int species, double* out) {
  if (mf_status s = require(p && out, "NULL argument")) return s;
  return guarded([&] {
    const ValidatedParams vp = ValidatedParams::validate(to_cpp(*p));
    *out = spreading_threshold(vp, species);
  });
}

mf_status mf_bounds(const mf_params* p, double m, double* k1, double* k2) {
  if (mf_status s = require(p && k1 && k2, "NULL argument")) return s;
  return guarded([&] {
    const ValidatedParams vp = ValidatedParams::validate(to_cpp(*p));
    const BoundsSpec bs = bounds_K(vp, m);
    *k1 = bs.K1;
    *k2 = bs.K2;
  });
}

mf_status mf_shifted_eigenvalue(const mf_params* p, double drift, double* out) {
  if (mf_status s = require(p && out, "NULL argument")) return s;
  return guarded([&] {
    const ValidatedParams vp = ValidatedParams::validate(to_cpp(*p));
    *out = first_eigenvalue_shifted(vp, drift);
  });
}

mf_status mf_fast_supersolution(const mf_params* p, double k, mf_supersolution* out) {
  if (mf_status s = require(p && out, "NULL argument")) return s;
  return guarded([&] {
    const ValidatedParams vp = ValidatedParams::validate(to_cpp(*p));
    const SupersolutionSpec ss = fast_supersolution(vp, k);
    out->k = ss.k;
    out->b0 = ss.b0;
    out->beta = ss.beta;
    out->gamma = ss.gamma;
    out->delta = ss.delta;
    out->v_bar = ss.v_bar;
    out->admissible = ss.admissible ? 1 : 0;
  });
}

mf_status mf_config_from_file(const char* path, mf_config** out) {
  if (mf_status s = require(path && out, "NULL argument")) return s;
  return guarded([&] { *out = new mf_config{parse_config_file(path)}; });
}

mf_status mf_config_from_text(const char* json_text, mf_config** out) {
  if (mf_status s = require(json_text && out, "NULL argument")) return s;
  return guarded([&] { *out = new mf_config{parse_config_text(json_text)}; });
}

mf_status mf_config_from_preset(const char* name, mf_config** out) {
  if (mf_status s = require(name && out, "NULL argument")) return s;
  return guarded([&] { *out = new mf_config{preset_config(name)}; });
}

mf_status mf_config_set_mode(mf_config* c, const char* mode) {
  if (mf_status s = require(c && mode, "NULL argument")) return s;
  return guarded([&] {
    const std::string m = mode;
    ExperimentConfig next = c->cfg;
    if (m == "run") next.mode = ExperimentMode::run;
    else if (m == "compare") next.mode = ExperimentMode::compare;
    else if (m == "certify-fast") next.mode = ExperimentMode::certify_fast;
    else if (m == "sweep") next.mode = ExperimentMode::sweep;
    else if (m == "convergence") next.mode = ExperimentMode::convergence;
    else raise(Errc::invalid_argument, "mode \"" + m + "\" is not recognized");
    finalize_config(next);  // mode switches can invalidate the config
    c->cfg = std::move(next);
  });
}

mf_status mf_config_set_out_dir(mf_config* c, const char* dir) {
  if (mf_status s = require(c && dir, "NULL argument")) return s;
  c->cfg.out_dir = dir;
  return MF_OK;
}

const char* mf_config_mode(const mf_config* c) {
  return c ? mode_name(c->cfg.mode) : "";
}

void mf_config_free(mf_config* c) { delete c; }

mf_status mf_sim_create(const mf_config* c, mf_sim** out) {
  if (mf_status s = require(c && out, "NULL argument")) return s;
  return guarded([&] {
    const ValidatedParams p = ValidatedParams::validate(c->cfg.params);
    const InitialData init = InitialData::make(c->cfg.u0, c->cfg.v0, p);
    *out = new mf_sim{c->cfg, Simulator(p, init, c->cfg.disc)};
  });
}

mf_status mf_sim_run(mf_sim* s, mf_result** out) {
  if (mf_status st = require(s && out, "NULL argument")) return st;
  return guarded([&] {
    RunResult rr = s->sim.run();
    const RegimeReport rep = classify_regime(rr, s->sim.params(), s->cfg.classifier);
    *out = new mf_result{s->cfg.params, s->cfg.disc, std::move(rr.traj.records), rep};
  });
}

mf_status mf_sim_sample(const mf_sim* s, double x, double* u, double* v) {
  if (mf_status st = require(s && u && v, "NULL argument")) return st;
  const auto [uu, vv] = s->sim.sample(x);
  *u = uu;
  *v = vv;
  return MF_OK;
}

double mf_sim_time(const mf_sim* s) { return s ? s->sim.state().t : 0.0; }

mf_status mf_sim_front(const mf_sim* s, double* g, double* h, double* g_dot,
                       double* h_dot) {
  if (mf_status st = require(s && g && h && g_dot && h_dot, "NULL argument")) return st;
  const FrontState& f = s->sim.state().front;
  *g = f.g;
  *h = f.h;
  *g_dot = f.g_dot;
  *h_dot = f.h_dot;
  return MF_OK;
}

void mf_sim_free(mf_sim* s) { delete s; }

const char* mf_result_classification(const mf_result* r) {
  return r ? classification_name(r->report.classification) : "";
}

int mf_result_blowup(const mf_result* r, double* t_blow) {
  if (!r || !r->report.t_blow) return 0;
  if (t_blow) *t_blow = *r->report.t_blow;
  return 1;
}

mf_status mf_result_front_final(const mf_result* r, double* g, double* h,
                                double* g_dot, double* h_dot) {
  if (mf_status st = require(r && g && h && g_dot && h_dot, "NULL argument")) return st;
  const FrontRecord& f = r->report.final_record;
  *g = f.g;
  *h = f.h;
  *g_dot = f.g_dot;
  *h_dot = f.h_dot;
  return MF_OK;
}

mf_status mf_result_report_json(const mf_result* r, int with_timestamp, char** out) {
  if (mf_status st = require(r && out, "NULL argument")) return st;
  return guarded([&] {
    *out = dup_string(
        regime_report_json(r->params, r->disc, r->report, with_timestamp != 0));
  });
}

mf_status mf_result_write_timeseries(const mf_result* r, const char* path) {
  if (mf_status st = require(r && path, "NULL argument")) return st;
  return guarded([&] { write_timeseries_csv(r->records, path); });
}

void mf_result_free(mf_result* r) { delete r; }

void mf_string_free(char* s) { delete[] s; }

mf_status mf_experiment_execute(const mf_config* c, const char* out_dir, int threads,
                                int with_timestamp, char** summary) {
  if (mf_status st = require(c != nullptr, "config is NULL")) return st;
  return guarded([&] {
    RunOptions opt;
    if (out_dir) opt.out_dir = out_dir;
    opt.threads = threads;
    opt.with_timestamp = with_timestamp != 0;
    ExperimentOutcome oc = execute_experiment(c->cfg, opt);
    if (summary) *summary = dup_string(oc.summary_json);
  });
}

mf_status mf_experiment_resume(const char* snapshot_path, const char* out_dir,
                               double t_end_override, int with_timestamp,
                               char** summary) {
  if (mf_status st = require(snapshot_path != nullptr, "snapshot path is NULL")) return st;
  return guarded([&] {
    RunOptions opt;
    if (out_dir) opt.out_dir = out_dir;
    opt.with_timestamp = with_timestamp != 0;
    ExperimentOutcome oc = resume_experiment(snapshot_path, opt, t_end_override);
    if (summary) *summary = dup_string(oc.summary_json);
  });
}

}  // extern "C"

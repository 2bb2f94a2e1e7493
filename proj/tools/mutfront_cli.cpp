// Command-line front end; all heavy lifting goes through the C API so this
// binary doubles as a smoke test of the shared library surface.

#include <cmath>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "mutfront.h"

namespace {

int exit_code_of(mf_status s) {
  switch (s) {
    case MF_OK:
      return 0;
    case MF_ERR_INVALID:
    case MF_ERR_PARSE:
    case MF_ERR_SCHEMA:
    case MF_ERR_VALIDATION:
    case MF_ERR_REGIME:
      return 2;
    case MF_ERR_UNSTABLE:
      return 3;
    case MF_ERR_IO:
      return 4;
    case MF_ERR_NOMEM:
    case MF_ERR_INTERNAL:
      return 1;
  }
  return 1;
}

int fail(mf_status s) {
  std::fprintf(stderr, "error (%s): %s\n", mf_status_name(s), mf_last_error());
  return exit_code_of(s);
}

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  int threads = 0;
  bool no_timestamp = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  auto* cfg = cmd->add_option("--config", o.config_path, "experiment config (JSON)");
  auto* pre = cmd->add_option("--preset", o.preset, "built-in parameter set: thm33, thm41, thm43");
  cfg->excludes(pre);
  cmd->add_option("--out", o.out_dir, "output directory (overrides the config)");
  cmd->add_option("--threads", o.threads, "worker threads for sweeps (0 = auto)");
  cmd->add_flag("--no-timestamp", o.no_timestamp,
                "omit generated_at so identical runs write identical bytes");
}

int run_mode(const CommonOpts& o, const char* mode) {
  if (o.config_path.empty() == o.preset.empty()) {
    std::fprintf(stderr, "error: exactly one of --config or --preset is required\n");
    return 2;
  }
  mf_config* cfg = nullptr;
  mf_status s = o.config_path.empty() ? mf_config_from_preset(o.preset.c_str(), &cfg)
                                      : mf_config_from_file(o.config_path.c_str(), &cfg);
  if (s != MF_OK) return fail(s);
  s = mf_config_set_mode(cfg, mode);
  if (s != MF_OK) {
    mf_config_free(cfg);
    return fail(s);
  }
  char* summary = nullptr;
  s = mf_experiment_execute(cfg, o.out_dir.empty() ? nullptr : o.out_dir.c_str(),
                            o.threads, o.no_timestamp ? 0 : 1, &summary);
  mf_config_free(cfg);
  if (s != MF_OK) return fail(s);
  std::fputs(summary, stdout);
  mf_string_free(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mutfront: two-species mutualistic system with moving habitat fronts"};
  app.set_version_flag("--version", std::string(mf_version()));
  app.require_subcommand(1);

  CommonOpts run_o, cmp_o, cert_o, sweep_o, conv_o;
  CLI::App* c_run = app.add_subcommand("run", "simulate and classify one configuration");
  add_common(c_run, run_o);
  CLI::App* c_cmp = app.add_subcommand(
      "compare", "run ordered initial data pairs and check containment");
  add_common(c_cmp, cmp_o);
  CLI::App* c_cert = app.add_subcommand(
      "certify-fast", "run under a decay certificate and verify domination");
  add_common(c_cert, cert_o);
  CLI::App* c_sweep = app.add_subcommand("sweep", "classify across a parameter grid");
  add_common(c_sweep, sweep_o);
  CLI::App* c_conv =
      app.add_subcommand("convergence", "grid refinement study against the finest level");
  add_common(c_conv, conv_o);

  std::string snapshot_path, resume_out;
  double t_end_override = std::nan("");
  bool resume_no_ts = false;
  CLI::App* c_res = app.add_subcommand("resume", "continue a snapshotted run");
  c_res->add_option("snapshot", snapshot_path, "snapshot file")->required();
  c_res->add_option("--out", resume_out, "output directory");
  c_res->add_option("--t-end", t_end_override, "extend or shorten the horizon");
  c_res->add_flag("--no-timestamp", resume_no_ts, "omit generated_at");

  CLI11_PARSE(app, argc, argv);

  if (c_run->parsed()) return run_mode(run_o, "run");
  if (c_cmp->parsed()) return run_mode(cmp_o, "compare");
  if (c_cert->parsed()) return run_mode(cert_o, "certify-fast");
  if (c_sweep->parsed()) return run_mode(sweep_o, "sweep");
  if (c_conv->parsed()) return run_mode(conv_o, "convergence");
  if (c_res->parsed()) {
    char* summary = nullptr;
    mf_status s = mf_experiment_resume(snapshot_path.c_str(),
                                       resume_out.empty() ? nullptr : resume_out.c_str(),
                                       t_end_override, resume_no_ts ? 0 : 1, &summary);
    if (s != MF_OK) return fail(s);
    std::fputs(summary, stdout);
    mf_string_free(summary);
    return 0;
  }
  return 2;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "core/csv_io.hpp"
#include "core/experiment.hpp"

using namespace mutfront;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TmpDir {
  fs::path path;
  TmpDir() {
    path = fs::temp_directory_path() /
           ("mutfront_exp_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TmpDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string sub(const char* name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunOptions quiet_opts(const std::string& dir, int threads = 0) {
  RunOptions opt;
  opt.out_dir = dir;
  opt.threads = threads;
  opt.with_timestamp = false;
  return opt;
}

// small weak-regime run that finishes in a few hundred steps
const char* kRunConfig = R"({
  "schema_version": 1,
  "mode": "run",
  "params": {"b1": 2.0, "c2": 2.0, "tau1": 0.1, "tau2": 0.05},
  "initial": {
    "u0": {"type": "perturbed_cosine", "amplitude": 0.4, "modes": 3,
           "mode_scale": 0.2, "seed": 5},
    "v0": {"level": 0.3}
  },
  "disc": {"n_u": 51, "n_v": 61, "dt": 1e-3, "t_end": 0.3, "L": 3.0}
})";

}  // namespace

TEST_CASE("a run experiment writes parseable, self-consistent artifacts") {
  TmpDir tmp;
  ExperimentConfig cfg = parse_config_text(kRunConfig);
  ExperimentOutcome out = execute_experiment(cfg, quiet_opts(tmp.sub("run")));

  const json rep = json::parse(out.summary_json);
  CHECK(rep.at("schema_version").get<int>() == 1);
  CHECK(rep.at("kind").get<std::string>() == "run");
  CHECK(rep.at("tool").at("name").get<std::string>() == "mutfront");
  CHECK(!rep.at("tool").contains("generated_at"));
  CHECK(rep.at("params").at("b1").get<double>() == 2.0);
  CHECK(rep.at("disc").at("n_u").get<int>() == 51);
  const std::string cls = rep.at("classification").get<std::string>();
  CHECK((cls == "Blowup" || cls == "GlobalFast" || cls == "GlobalSlow" ||
         cls == "Undetermined"));
  CHECK(rep.at("diagnostics").at("run_status").get<std::string>() == "completed");
  CHECK(rep.at("final").at("t").get<double>() == doctest::Approx(0.3).epsilon(1e-9));

  // files match the returned summary and the run record stream
  CHECK(slurp(tmp.sub("run") + "/report.json") == out.summary_json);
  std::vector<FrontRecord> recs =
      read_timeseries_csv(tmp.sub("run") + "/timeseries.csv");
  REQUIRE(recs.size() > 100);
  CHECK(recs.front().t == 0.0);
  CHECK(recs.back().t == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(recs.back().h == rep.at("final").at("h").get<double>());
}

TEST_CASE("timestamp-free runs are byte-for-byte reproducible") {
  TmpDir tmp;
  ExperimentConfig cfg = parse_config_text(kRunConfig);
  execute_experiment(cfg, quiet_opts(tmp.sub("a")));
  execute_experiment(cfg, quiet_opts(tmp.sub("b")));
  CHECK(slurp(tmp.sub("a") + "/report.json") == slurp(tmp.sub("b") + "/report.json"));
  CHECK(slurp(tmp.sub("a") + "/timeseries.csv") ==
        slurp(tmp.sub("b") + "/timeseries.csv"));
}

TEST_CASE("sweep output does not depend on the worker count") {
  TmpDir tmp;
  ExperimentConfig cfg = parse_config_text(R"({
    "schema_version": 1,
    "mode": "sweep",
    "params": {"b1": 2.0, "c2": 2.0},
    "initial": {"u0": {"amplitude": 0.4}, "v0": {"level": 0.3}},
    "disc": {"n_u": 51, "n_v": 61, "dt": 1e-3, "t_end": 0.3, "L": 3.0},
    "sweep": {"axes": [{"param": "a1", "min": 0.5, "max": 2.0, "count": 3},
                       {"param": "mu", "min": 0.5, "max": 1.5, "count": 2}]}
  })");
  execute_experiment(cfg, quiet_opts(tmp.sub("t1"), 1));
  execute_experiment(cfg, quiet_opts(tmp.sub("t4"), 4));
  const std::string csv1 = slurp(tmp.sub("t1") + "/sweep.csv");
  CHECK(csv1 == slurp(tmp.sub("t4") + "/sweep.csv"));
  CHECK(csv1.rfind("a1,mu,classification,t_blow,beta_fit,h_final\n", 0) == 0);
  CHECK(slurp(tmp.sub("t1") + "/sweep.json") == slurp(tmp.sub("t4") + "/sweep.json"));

  const json rep = json::parse(slurp(tmp.sub("t1") + "/sweep.json"));
  CHECK(rep.at("kind").get<std::string>() == "sweep");
  CHECK(rep.at("cells").get<int>() == 6);
  int total = 0;
  for (const auto& [k, v] : rep.at("classification_counts").items()) total += v.get<int>();
  CHECK(total == 6);
}

TEST_CASE("a one-cell sweep agrees with the equivalent plain run") {
  TmpDir tmp;
  ExperimentConfig run_cfg = parse_config_text(kRunConfig);
  ExperimentOutcome run_out = execute_experiment(run_cfg, quiet_opts(tmp.sub("run")));
  const std::string run_cls =
      json::parse(run_out.summary_json).at("classification").get<std::string>();

  ExperimentConfig sweep_cfg = parse_config_text(R"({
    "schema_version": 1,
    "mode": "sweep",
    "params": {"b1": 2.0, "c2": 2.0, "tau1": 0.1, "tau2": 0.05},
    "initial": {
      "u0": {"type": "perturbed_cosine", "amplitude": 0.4, "modes": 3,
             "mode_scale": 0.2, "seed": 5},
      "v0": {"level": 0.3}
    },
    "disc": {"n_u": 51, "n_v": 61, "dt": 1e-3, "t_end": 0.3, "L": 3.0},
    "sweep": {"axes": [{"param": "mu", "min": 1.0, "max": 1.0, "count": 1}]}
  })");
  execute_experiment(sweep_cfg, quiet_opts(tmp.sub("sweep")));
  const std::string csv = slurp(tmp.sub("sweep") + "/sweep.csv");
  CHECK(csv.find(run_cls) != std::string::npos);
}

TEST_CASE("sweep cells with invalid parameters become Error rows") {
  TmpDir tmp;
  ExperimentConfig cfg = parse_config_text(R"({
    "schema_version": 1,
    "mode": "sweep",
    "params": {"b1": 2.0, "c2": 2.0},
    "initial": {"u0": {"amplitude": 0.4}, "v0": {"level": 0.3}},
    "disc": {"n_u": 51, "n_v": 61, "dt": 1e-3, "t_end": 0.2, "L": 3.0},
    "sweep": {"axes": [{"param": "b", "min": -1.0, "max": 1.0, "count": 3}]}
  })");
  execute_experiment(cfg, quiet_opts(tmp.sub("s")));
  const json rep = json::parse(slurp(tmp.sub("s") + "/sweep.json"));
  CHECK(rep.at("classification_counts").at("Error").get<int>() == 2);  // b = -1, 0
  const std::string csv = slurp(tmp.sub("s") + "/sweep.csv");
  CHECK(csv.find("-1,Error,nan,nan,nan") != std::string::npos);
}

TEST_CASE("compare experiment confirms ordering for nested data") {
  TmpDir tmp;
  ExperimentConfig cfg = parse_config_text(R"({
    "schema_version": 1,
    "mode": "compare",
    "params": {"b1": 2.0, "c2": 2.0, "tau1": 0.1, "tau2": 0.1},
    "initial": {"u0": {"amplitude": 0.3}, "v0": {"level": 0.2}},
    "compare": {"u0": {"amplitude": 0.6}, "v0": {"level": 0.5}},
    "disc": {"n_u": 51, "n_v": 61, "dt": 1e-3, "t_end": 0.4, "L": 3.0}
  })");
  execute_experiment(cfg, quiet_opts(tmp.sub("cmp")));
  const json rep = json::parse(slurp(tmp.sub("cmp") + "/ordering.json"));
  CHECK(rep.at("kind").get<std::string>() == "compare");
  CHECK(rep.at("ordered").get<bool>());
  CHECK(rep.at("checked_records").get<int>() > 100);
  CHECK(rep.at("checked_states").get<int>() > 0);
  CHECK(rep.at("violations").empty());
  CHECK(rep.at("run_status_a").get<std::string>() == "completed");
  CHECK(fs::exists(tmp.sub("cmp") + "/timeseries_a.csv"));
  CHECK(fs::exists(tmp.sub("cmp") + "/timeseries_b.csv"));
}

TEST_CASE("compare experiment refuses data that starts out of order") {
  TmpDir tmp;
  ExperimentConfig cfg = parse_config_text(R"({
    "schema_version": 1,
    "mode": "compare",
    "params": {"b1": 2.0, "c2": 2.0},
    "initial": {"u0": {"amplitude": 0.4}, "v0": {"level": 0.2}},
    "compare": {"u0": {"amplitude": 0.1}},
    "disc": {"n_u": 51, "n_v": 61, "dt": 1e-3, "t_end": 0.2, "L": 3.0}
  })");
  try {
    execute_experiment(cfg, quiet_opts(tmp.sub("cmp")));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::precondition_violated);
    CHECK(std::string(e.what()).find("compare") != std::string::npos);
  }
}

TEST_CASE("certify-fast on an admissible habitat produces a clean certificate") {
  TmpDir tmp;
  ExperimentConfig cfg = preset_config("thm43");
  cfg.disc.t_end = 1.0;
  cfg.disc.n_u = 101;
  cfg.disc.n_v = 201;
  cfg.disc.dt = 5e-4;
  ExperimentOutcome out = execute_experiment(cfg, quiet_opts(tmp.sub("cert")));
  const json rep = json::parse(out.summary_json);
  CHECK(rep.at("kind").get<std::string>() == "certify-fast");
  CHECK(rep.at("certificate").at("admissible").get<bool>());
  CHECK(rep.at("certificate").at("k").get<double>() == 2.0);
  CHECK(rep.at("certificate").at("beta").get<double>() == doctest::Approx(1.5));
  CHECK(rep.at("domination_ok").get<bool>());
  CHECK(rep.at("violations").empty());
  CHECK(rep.at("certified").get<bool>());
  CHECK(rep.at("classification").get<std::string>() == "GlobalFast");
  CHECK(slurp(tmp.sub("cert") + "/certificate.json") == out.summary_json);
}

TEST_CASE("convergence experiment reports shrinking errors and clean orders") {
  TmpDir tmp;
  ExperimentConfig cfg = parse_config_text(R"({
    "schema_version": 1,
    "mode": "convergence",
    "params": {"b1": 2.0, "c2": 2.0},
    "initial": {"u0": {"amplitude": 0.5}, "v0": {"level": 0.4}},
    "disc": {"t_end": 0.2, "L": 3.0},
    "convergence": {"levels": [{"n_u": 21, "n_v": 31, "dt": 2e-3},
                               {"n_u": 41, "n_v": 61, "dt": 1e-3},
                               {"n_u": 81, "n_v": 121, "dt": 5e-4}]}
  })");
  execute_experiment(cfg, quiet_opts(tmp.sub("conv")));
  const json rep = json::parse(slurp(tmp.sub("conv") + "/convergence.json"));
  CHECK(rep.at("kind").get<std::string>() == "convergence");
  const auto& levels = rep.at("levels");
  REQUIRE(levels.size() == 3);
  CHECK(levels[0].at("err_u").get<double>() > 0.0);
  CHECK(levels[1].at("err_u").get<double>() > 0.0);
  CHECK(levels[1].at("err_u").get<double>() < levels[0].at("err_u").get<double>());
  CHECK(levels[2].at("err_u").get<double>() == 0.0);  // reference level
  CHECK(levels[1].contains("order_u"));
  CHECK(!levels[2].contains("order_u"));  // error hit zero, no ratio to take

  const std::string csv = slurp(tmp.sub("conv") + "/convergence.csv");
  CHECK(csv.rfind("level,dx,dt,err_u,err_front,order_u,order_front\n", 0) == 0);
}

TEST_CASE("a snapshotted run can be resumed and re-reported") {
  TmpDir tmp;
  ExperimentConfig cfg = parse_config_text(R"({
    "schema_version": 1,
    "mode": "run",
    "params": {"b1": 2.0, "c2": 2.0, "tau1": 0.05},
    "initial": {"u0": {"amplitude": 0.4}, "v0": {"level": 0.3}},
    "disc": {"n_u": 51, "n_v": 61, "dt": 1e-3, "t_end": 0.25, "L": 3.0},
    "snapshot": {"at_t": 0.1, "write_final": true}
  })");
  ExperimentOutcome first = execute_experiment(cfg, quiet_opts(tmp.sub("orig")));
  CHECK(fs::exists(tmp.sub("orig") + "/snapshot.bin"));
  CHECK(fs::exists(tmp.sub("orig") + "/snapshot_final.bin"));

  ExperimentOutcome resumed = resume_experiment(
      tmp.sub("orig") + "/snapshot.bin", quiet_opts(tmp.sub("res")), std::nan(""));
  const json rep = json::parse(resumed.summary_json);
  CHECK(rep.at("kind").get<std::string>() == "resume");
  CHECK(rep.at("resumed_from_t").get<double>() == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(rep.at("final").at("t").get<double>() == doctest::Approx(0.25).epsilon(1e-9));

  // the resumed tail lands on the same final state as the original run
  const json orig = json::parse(first.summary_json);
  CHECK(rep.at("final").at("h").get<double>() ==
        orig.at("final").at("h").get<double>());
  CHECK(rep.at("final").at("max_u").get<double>() ==
        orig.at("final").at("max_u").get<double>());

  std::vector<FrontRecord> tail =
      read_timeseries_csv(tmp.sub("res") + "/timeseries.csv");
  REQUIRE(!tail.empty());
  CHECK(tail.front().t == doctest::Approx(0.1).epsilon(1e-6));

  // bad snapshot horizon override
  CHECK_THROWS_AS(resume_experiment(tmp.sub("orig") + "/snapshot.bin",
                                    quiet_opts(tmp.sub("res2")), 0.05),
                  Error);
}

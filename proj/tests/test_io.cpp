#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "core/csv_io.hpp"
#include "core/snapshot.hpp"

using namespace mutfront;
namespace fs = std::filesystem;

namespace {

struct TmpDir {
  fs::path path;
  TmpDir() {
    path = fs::temp_directory_path() /
           ("mutfront_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TmpDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const char* name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ValidatedParams demo_params() {
  ModelParams p;
  p.b1 = 2.0;
  p.c2 = 2.0;
  p.tau1 = 0.05;
  p.tau2 = 0.02;
  return ValidatedParams::validate(p);
}

Simulator demo_simulator(double t_end = 0.5) {
  auto p = demo_params();
  UProfileSpec u;
  VProfileSpec v;
  v.level = 0.5;
  InitialData id = InitialData::make(u, v, p);
  Discretization d;
  d.n_u = 51;
  d.n_v = 61;
  d.dt = 1e-3;
  d.t_end = t_end;
  d.L = 4.0;
  return Simulator(p, id, d);
}

}  // namespace

TEST_CASE("doubles survive the text round trip bit for bit") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 2000; ++i) {
    double x;
    std::uint64_t bits = rng();
    std::memcpy(&x, &bits, sizeof(x));
    if (!std::isfinite(x)) continue;
    const std::string s = format_double(x);
    const double back = std::strtod(s.c_str(), nullptr);
    CHECK(back == x);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");  // %g drops trailing zeros
}

TEST_CASE("timeseries files: exact header, faithful round trip, stable bytes") {
  TmpDir tmp;
  std::vector<FrontRecord> recs;
  std::mt19937_64 rng(7);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 25; ++i) {
    FrontRecord r;
    r.t = 0.01 * i;
    r.g = -1.0 - unit();
    r.h = 1.0 + unit();
    r.g_dot = -unit();
    r.h_dot = unit();
    r.max_u = unit() * 1e-7;
    r.max_v = unit() * 1e5;
    r.mass_u = unit();
    recs.push_back(r);
  }
  const std::string path = tmp.file("ts.csv");
  write_timeseries_csv(recs, path);

  const std::string text = slurp(path);
  CHECK(text.rfind("t,g,h,g_dot,h_dot,max_u,max_v,mass_u\n", 0) == 0);

  std::vector<FrontRecord> back = read_timeseries_csv(path);
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].t == recs[i].t);
    CHECK(back[i].g == recs[i].g);
    CHECK(back[i].h == recs[i].h);
    CHECK(back[i].g_dot == recs[i].g_dot);
    CHECK(back[i].h_dot == recs[i].h_dot);
    CHECK(back[i].max_u == recs[i].max_u);
    CHECK(back[i].max_v == recs[i].max_v);
    CHECK(back[i].mass_u == recs[i].mass_u);
  }

  // a second write is byte-identical
  const std::string path2 = tmp.file("ts2.csv");
  write_timeseries_csv(recs, path2);
  CHECK(slurp(path2) == text);
}

TEST_CASE("timeseries reader rejects foreign files with line numbers") {
  TmpDir tmp;
  const std::string path = tmp.file("bad.csv");
  write_text_file(path, "time,left,right\n1,2,3\n");
  CHECK_THROWS_AS(read_timeseries_csv(path), Error);

  write_text_file(path, "t,g,h,g_dot,h_dot,max_u,max_v,mass_u\n1,2,3\n");
  try {
    read_timeseries_csv(path);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  CHECK_THROWS_AS(read_timeseries_csv(tmp.file("missing.csv")), Error);
}

TEST_CASE("sweep and convergence tables carry their documented headers") {
  TmpDir tmp;
  SweepRow row;
  row.coords = {0.5, 2.0};
  row.classification = "GlobalSlow";
  row.h_final = 3.75;
  SweepRow err_row;
  err_row.coords = {0.5, 4.0};
  err_row.classification = "Error";
  write_sweep_csv({"a1", "mu"}, {row, err_row}, tmp.file("sweep.csv"));
  const std::string sweep = slurp(tmp.file("sweep.csv"));
  CHECK(sweep.rfind("a1,mu,classification,t_blow,beta_fit,h_final\n", 0) == 0);
  CHECK(sweep.find("GlobalSlow") != std::string::npos);
  CHECK(sweep.find("Error,nan") != std::string::npos);
  CHECK(sweep.find("3.75") != std::string::npos);

  ConvergenceRow cr;
  cr.level = 1;
  cr.dx = 0.02;
  cr.dt = 4e-4;
  cr.err_u = 1e-4;
  cr.err_front = 2e-5;
  cr.order_u = 1.96;
  write_convergence_csv({cr}, tmp.file("conv.csv"));
  const std::string conv = slurp(tmp.file("conv.csv"));
  CHECK(conv.rfind("level,dx,dt,err_u,err_front,order_u,order_front\n", 0) == 0);
  CHECK(conv.find("1.96") != std::string::npos);
  CHECK(conv.find("nan") != std::string::npos);  // order_front left unset
}

TEST_CASE("writes into a missing directory fail loudly") {
  TmpDir tmp;
  const std::string path = (tmp.path / "no_such_dir" / "x.csv").string();
  CHECK_THROWS_AS(write_text_file(path, "hello"), Error);
  CHECK_THROWS_AS(write_timeseries_csv({}, path), Error);
  try {
    write_text_file(path, "hello");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io_error);
  }
}

TEST_CASE("snapshot round trip preserves every stored field") {
  TmpDir tmp;
  Simulator sim = demo_simulator();
  RunResult rr = sim.run_until(0.2);
  REQUIRE(rr.status == RunStatus::completed);
  const std::string path = tmp.file("snap.bin");
  write_snapshot(sim, path);

  SnapshotData snap = read_snapshot(path);
  CHECK(snap.params.b1 == 2.0);
  CHECK(snap.params.tau1 == 0.05);
  CHECK(snap.disc.n_u == 51);
  CHECK(snap.disc.n_v == 61);
  CHECK(snap.disc.L == 4.0);
  CHECK(snap.step_index == sim.step_index());
  CHECK(snap.initial_gradient_scale == sim.initial_gradient_scale());
  CHECK(snap.current.t == sim.state().t);
  CHECK(snap.current.front.g == sim.state().front.g);
  CHECK(snap.current.front.h_dot == sim.state().front.h_dot);
  REQUIRE(snap.current.u.size() == sim.state().u.size());
  for (std::size_t i = 0; i < snap.current.u.size(); ++i) {
    CHECK(snap.current.u[i] == sim.state().u[i]);
  }
  REQUIRE(snap.entries.size() == sim.history().entries().size());
  for (std::size_t k = 0; k < snap.entries.size(); ++k) {
    CHECK(snap.entries[k].t == sim.history().entries()[k].t);
  }
  CHECK(snap.initial.t == 0.0);
}

TEST_CASE("a resumed run finishes bit-exactly like the uninterrupted one") {
  TmpDir tmp;

  // reference: run straight through, pausing at the same point in time so the
  // time-step segmentation matches the snapshot path
  Simulator ref = demo_simulator();
  REQUIRE(ref.run_until(0.2).status == RunStatus::completed);
  RunResult tail_ref = ref.run();
  REQUIRE(tail_ref.status == RunStatus::completed);

  // snapshot path: pause, serialize, restore in a fresh Simulator, continue
  Simulator paused = demo_simulator();
  REQUIRE(paused.run_until(0.2).status == RunStatus::completed);
  const std::string path = tmp.file("pause.bin");
  write_snapshot(paused, path);
  Simulator resumed = simulator_from_snapshot(read_snapshot(path), std::nan(""));
  RunResult tail_res = resumed.run();
  REQUIRE(tail_res.status == RunStatus::completed);

  CHECK(resumed.state().t == ref.state().t);
  CHECK(resumed.state().front.g == ref.state().front.g);
  CHECK(resumed.state().front.h == ref.state().front.h);
  CHECK(resumed.state().front.g_dot == ref.state().front.g_dot);
  CHECK(resumed.state().front.h_dot == ref.state().front.h_dot);
  REQUIRE(resumed.state().u.size() == ref.state().u.size());
  for (std::size_t i = 0; i < ref.state().u.size(); ++i) {
    CHECK(resumed.state().u[i] == ref.state().u[i]);
  }
  for (std::size_t j = 0; j < ref.state().v.size(); ++j) {
    CHECK(resumed.state().v[j] == ref.state().v[j]);
  }
  CHECK(resumed.step_index() == ref.step_index());

  // records of the two tails agree bitwise as well
  REQUIRE(tail_res.traj.records.size() == tail_ref.traj.records.size());
  for (std::size_t i = 0; i < tail_ref.traj.records.size(); ++i) {
    CHECK(tail_res.traj.records[i].h == tail_ref.traj.records[i].h);
    CHECK(tail_res.traj.records[i].max_u == tail_ref.traj.records[i].max_u);
  }
}

TEST_CASE("t_end override extends a resumed run") {
  TmpDir tmp;
  Simulator sim = demo_simulator(0.3);
  REQUIRE(sim.run_until(0.1).status == RunStatus::completed);
  const std::string path = tmp.file("ext.bin");
  write_snapshot(sim, path);

  Simulator longer = simulator_from_snapshot(read_snapshot(path), 0.6);
  RunResult rr = longer.run();
  REQUIRE(rr.status == RunStatus::completed);
  CHECK(std::abs(longer.state().t - 0.6) < 1e-9);

  // an override at or before the snapshot time is rejected
  CHECK_THROWS_AS(simulator_from_snapshot(read_snapshot(path), 0.05), Error);
}

TEST_CASE("snapshot reader rejects foreign, corrupt and truncated files") {
  TmpDir tmp;
  const std::string garbage = tmp.file("garbage.bin");
  write_text_file(garbage, "this is not a snapshot at all, not even close");
  try {
    read_snapshot(garbage);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
  }

  Simulator sim = demo_simulator();
  REQUIRE(sim.run_until(0.05).status == RunStatus::completed);
  const std::string good = tmp.file("good.bin");
  write_snapshot(sim, good);
  CHECK_NOTHROW(read_snapshot(good));

  // flip the format version field (right after the 8-byte magic)
  std::string bytes = slurp(good);
  const std::string versioned = tmp.file("versioned.bin");
  bytes[8] = 99;
  write_text_file(versioned, bytes);
  try {
    read_snapshot(versioned);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::schema_mismatch);
  }

  // drop the tail
  const std::string trunc = tmp.file("trunc.bin");
  write_text_file(trunc, slurp(good).substr(0, 200));
  try {
    read_snapshot(trunc);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io_error);
  }

  CHECK_THROWS_AS(read_snapshot(tmp.file("never_written.bin")), Error);
}

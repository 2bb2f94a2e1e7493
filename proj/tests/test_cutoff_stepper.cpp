#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/cutoff_stepper.hpp"
#include "core/solver.hpp"

using namespace mutfront;

namespace {

ValidatedParams gentle_params(double mu, double tau = 0.0) {
  ModelParams p;
  p.b1 = 2.0;
  p.c2 = 2.0;
  p.mu = mu;
  p.tau1 = tau;
  p.tau2 = tau;
  return ValidatedParams::validate(p);
}

InitialData cosine_data(const ValidatedParams& p, double amp, double level) {
  UProfileSpec u;
  u.amplitude = amp;
  VProfileSpec v;
  v.level = level;
  return InitialData::make(u, v, p);
}

Discretization disc_for(double t_end, double L, int n, double dt) {
  Discretization d;
  d.n_u = n;
  d.n_v = n;
  d.dt = dt;
  d.t_end = t_end;
  d.L = L;
  return d;
}

}  // namespace

TEST_CASE("fixed-frame stepper matches the production solver on a short run") {
  auto p = gentle_params(0.5);
  auto id = cosine_data(p, 0.5, 0.5);
  Discretization d = disc_for(0.25, 4.0, 201, 2e-4);

  CutoffRunResult cr = run_cutoff_frame(p, id, d);
  REQUIRE(cr.status == RunStatus::completed);
  REQUIRE(cr.transform_ok);
  CHECK(cr.final_state.t == doctest::Approx(0.25).epsilon(1e-9));

  RunResult ar = run_simulation(p, id, d);
  REQUIRE(ar.status == RunStatus::completed);
  const FieldState& af = ar.traj.samples.back();

  CHECK(std::abs(cr.final_state.front.g - af.front.g) < 5e-4);
  CHECK(std::abs(cr.final_state.front.h - af.front.h) < 5e-4);

  // field agreement at the fixed-frame nodes' physical positions
  const std::vector<double> xs = cutoff_node_positions(cr);
  double worst_u = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    worst_u = std::max(worst_u, std::abs(cr.final_state.w[i] - state_u_at(af, xs[i])));
  }
  CHECK(worst_u < 5e-3);

  // v lives on matching uniform grids in both solvers away from the fronts
  double worst_v = 0.0;
  for (std::size_t j = 0; j < cr.final_state.z.size(); ++j) {
    worst_v = std::max(worst_v, std::abs(cr.final_state.z[j] - af.v[j]));
  }
  CHECK(worst_v < 5e-3);
}

TEST_CASE("fixed-frame stepper with delays stays close to the production solver") {
  auto p = gentle_params(0.5, 0.1);
  auto id = cosine_data(p, 0.5, 0.5);
  Discretization d = disc_for(0.25, 4.0, 201, 2e-4);
  CutoffRunResult cr = run_cutoff_frame(p, id, d);
  REQUIRE(cr.status == RunStatus::completed);
  REQUIRE(cr.transform_ok);
  RunResult ar = run_simulation(p, id, d);
  REQUIRE(ar.status == RunStatus::completed);
  const FieldState& af = ar.traj.samples.back();
  CHECK(std::abs(cr.final_state.front.h - af.front.h) < 2e-3);
  const std::vector<double> xs = cutoff_node_positions(cr);
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    worst = std::max(worst, std::abs(cr.final_state.w[i] - state_u_at(af, xs[i])));
  }
  CHECK(worst < 1e-2);
}

TEST_CASE("run stops cleanly when the fronts leave the validity window") {
  auto p = gentle_params(5.0);  // fast fronts leave b/8 almost immediately
  auto id = cosine_data(p, 1.0, 0.5);
  Discretization d = disc_for(2.0, 4.0, 101, 5e-4);
  CutoffRunResult cr = run_cutoff_frame(p, id, d);
  CHECK_FALSE(cr.transform_ok);
  CHECK(cr.final_state.t < 2.0);
  // it got meaningfully close to the edge of the window before stopping
  const double moved = std::max(std::abs(cr.final_state.front.g + 1.0),
                                std::abs(cr.final_state.front.h - 1.0));
  CHECK(moved > 1.0 / 16.0);
  CHECK(moved <= 1.0 / 8.0 + 1e-12);
}

TEST_CASE("reference nodes start on the physical grid") {
  auto p = gentle_params(0.5);
  auto id = cosine_data(p, 0.5, 0.0);
  Discretization d = disc_for(1e-9, 4.0, 51, 1e-9);
  CutoffRunResult cr = run_cutoff_frame(p, id, d);
  const std::vector<double> xs = cutoff_node_positions(cr);
  REQUIRE(xs.size() == 51);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double y = -1.0 + 2.0 * static_cast<double>(i) / 50.0;
    CHECK(xs[i] == doctest::Approx(y).epsilon(1e-7));
  }
  CHECK(cr.final_state.w.front() == 0.0);
  CHECK(cr.final_state.w.back() == 0.0);
}

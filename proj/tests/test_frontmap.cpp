#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/frontmap.hpp"

using namespace mutfront;

TEST_CASE("affine habitat normalization") {
  CHECK(affine_to_unit(-2.0, 4.0, 1.0) == doctest::Approx(0.5));
  CHECK(affine_to_unit(-2.0, 4.0, -2.0) == 0.0);
  CHECK(affine_from_unit(-2.0, 4.0, 1.0) == 4.0);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const double g = -3.0 + 1e-9 * static_cast<double>(rng() >> 40);
    const double h = g + 0.5 + 1e-9 * static_cast<double>(rng() >> 40);
    const double x = g + (h - g) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    CHECK(affine_from_unit(g, h, affine_to_unit(g, h, x)) ==
          doctest::Approx(x).epsilon(1e-13));
  }
  CHECK_THROWS_AS(affine_to_unit(1.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(affine_from_unit(2.0, 1.0, 0.5), Error);
}

TEST_CASE("cutoff weight: plateau, support, mirror symmetry") {
  const double b = 1.6;
  CutoffPair cp(b);
  // plateau within b/8 of +b, zero beyond b/2
  for (double y : {b, b - b / 8.0, b + b / 8.0, b - b / 16.0}) {
    auto z = cp.zeta(y);
    CHECK(z.f == 1.0);
    CHECK(z.d1 == 0.0);
    CHECK(z.d2 == 0.0);
  }
  for (double y : {b - b / 2.0, b + b / 2.0, 0.0, -b, 10.0 * b}) {
    auto z = cp.zeta(y);
    CHECK(z.f == 0.0);
    CHECK(z.d1 == 0.0);
  }
  // strictly between 0 and 1 inside the transition
  for (double y : {b - 0.3 * b, b + 0.3 * b}) {
    auto z = cp.zeta(y);
    CHECK(z.f > 0.0);
    CHECK(z.f < 1.0);
  }
  // xi is the reflection of zeta; odd derivatives flip sign
  for (int i = 0; i <= 200; ++i) {
    const double y = -2.0 * b + 4.0 * b * i / 200.0;
    auto x = cp.xi(y);
    auto z = cp.zeta(-y);
    CHECK(x.f == z.f);
    CHECK(x.d1 == -z.d1);
    CHECK(x.d2 == z.d2);
    CHECK(x.d3 == -z.d3);
  }
}

TEST_CASE("cutoff weight slope bound 35/(6b) < 6/b") {
  for (double b : {0.25, 1.0, 3.7}) {
    CutoffPair cp(b);
    double peak = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      const double y = b / 2.0 + b * i / 20000.0;  // covers the transition
      peak = std::max(peak, std::abs(cp.zeta(y).d1));
    }
    const double bound = 35.0 / (6.0 * b);
    CHECK(peak <= bound * (1.0 + 1e-12));
    CHECK(peak == doctest::Approx(bound).epsilon(1e-6));  // attained mid-transition
    CHECK(bound < 6.0 / b);
  }
}

TEST_CASE("cutoff weight derivatives match finite differences") {
  const double b = 1.0;
  CutoffPair cp(b);
  const double e = 1e-5;
  for (int i = 1; i < 40; ++i) {
    const double y = b / 2.0 + (3.0 * b / 8.0) * i / 40.0;  // inside transition
    auto z = cp.zeta(y);
    const double fp = cp.zeta(y + e).f, fm = cp.zeta(y - e).f;
    const double d1p = cp.zeta(y + e).d1, d1m = cp.zeta(y - e).d1;
    const double d2p = cp.zeta(y + e).d2, d2m = cp.zeta(y - e).d2;
    CHECK(z.d1 == doctest::Approx((fp - fm) / (2 * e)).epsilon(1e-7));
    CHECK(z.d2 == doctest::Approx((d1p - d1m) / (2 * e)).epsilon(1e-6));
    CHECK(z.d3 == doctest::Approx((d2p - d2m) / (2 * e)).epsilon(1e-5));
  }
}

TEST_CASE("cutoff weight joins are C^3") {
  const double b = 2.0;
  CutoffPair cp(b);
  const double eps = 1e-7;
  for (double join : {b - b / 2.0, b - b / 8.0, b + b / 8.0, b + b / 2.0}) {
    auto lo = cp.zeta(join - eps);
    auto hi = cp.zeta(join + eps);
    // near the plateau the value is a cancellation of O(100) terms down to 1,
    // so the join gap is roundoff-sized rather than zero
    CHECK(std::abs(hi.f - lo.f) < 1e-13);
    CHECK(std::abs(hi.d1 - lo.d1) < 1e-17);
    CHECK(std::abs(hi.d2 - lo.d2) < 1e-10);
    CHECK(std::abs(hi.d3 - lo.d3) < 1e-3);
  }
}

TEST_CASE("derivative supports of the two weights are disjoint") {
  const double b = 1.3;
  CutoffPair cp(b);
  for (int i = 0; i <= 4000; ++i) {
    const double y = -2.0 * b + 4.0 * b * i / 4000.0;
    CHECK(cp.xi(y).d1 * cp.zeta(y).d1 == 0.0);
  }
}

TEST_CASE("identity transform when the fronts have not moved") {
  const double b = 1.0;
  CutoffPair cp(b);
  for (int i = 0; i <= 100; ++i) {
    const double y = -b + 2.0 * b * i / 100.0;
    auto tc = transform_coefficients(-b, b, y, cp);
    CHECK(tc.A == 1.0);
    CHECK(tc.B == 0.0);
    CHECK(tc.C == 1.0);
    CHECK(cutoff_to_physical(-b, b, y, cp) == y);
  }
}

TEST_CASE("forward map: translation at the walls, identity in the core") {
  const double b = 1.0;
  CutoffPair cp(b);
  const double g = -b - 0.1, h = b + 0.07;
  CHECK(cutoff_to_physical(g, h, -b, cp) == doctest::Approx(g).epsilon(1e-15));
  CHECK(cutoff_to_physical(g, h, b, cp) == doctest::Approx(h).epsilon(1e-15));
  for (double y : {-0.5, 0.0, 0.49}) {  // |y| <= b/2: both weights vanish
    CHECK(cutoff_to_physical(g, h, y, cp) == y);
  }
  // strictly monotone in y
  double prev = cutoff_to_physical(g, h, -1.5 * b, cp);
  for (int i = 1; i <= 600; ++i) {
    const double y = -1.5 * b + 3.0 * b * i / 600.0;
    const double x = cutoff_to_physical(g, h, y, cp);
    CHECK(x > prev);
    prev = x;
  }
}

TEST_CASE("transform coefficients against a finite-difference oracle") {
  const double b = 0.8;
  CutoffPair cp(b);
  std::mt19937_64 rng(99);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const double e = 1e-5 * b;
  for (int trial = 0; trial < 20; ++trial) {
    const double g = -b + (unit() - 0.5) * b / 4.0;  // within b/8 of -b
    const double h = b + (unit() - 0.5) * b / 4.0;
    REQUIRE(transform_valid(g, h, b));
    for (int i = 0; i <= 60; ++i) {
      const double y = -1.4 * b + 2.8 * b * i / 60.0;
      auto x_of = [&](double yy) { return cutoff_to_physical(g, h, yy, cp); };
      const double xp = x_of(y + e), xm = x_of(y - e), x0 = x_of(y);
      const double dxdy = (xp - xm) / (2.0 * e);
      const double d2xdy2 = (xp - 2.0 * x0 + xm) / (e * e);
      auto tc = transform_coefficients(g, h, y, cp);
      CHECK(tc.C == doctest::Approx(1.0 / dxdy).epsilon(2e-8));
      CHECK(tc.A == doctest::Approx(tc.C * tc.C).epsilon(1e-15));
      const double B_ref = -d2xdy2 / (dxdy * dxdy * dxdy);
      CHECK(tc.B == doctest::Approx(B_ref).epsilon(5e-5).scale(1.0 / b));
    }
  }
}

TEST_CASE("validity window is inclusive at b/8") {
  const double b = 2.0;
  CHECK(transform_valid(-b, b, b));
  CHECK(transform_valid(-b - b / 8.0, b + b / 8.0, b));
  CHECK(transform_valid(-b + b / 8.0, b - b / 8.0, b));
  CHECK_FALSE(transform_valid(-b - b / 8.0 - 1e-12, b, b));
  CHECK_FALSE(transform_valid(-b, b + b / 8.0 + 1e-12, b));
}

TEST_CASE("degenerate cutoff construction rejected") {
  CHECK_THROWS_AS(CutoffPair(0.0), Error);
  CHECK_THROWS_AS(CutoffPair(-1.0), Error);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bjw/errors.hpp"
#include "bjw/flux.hpp"
#include "bjw/riemann.hpp"
#include "oracles.hpp"

using namespace bjw;

TEST_CASE("forward-composed data are recovered") {
  const State Ul{0.25, 0.0, -0.25};
  for (double eta : {0.0, 1e-3, 0.05, 0.2}) {
    for (const std::array<double, 3>& s :
         {std::array<double, 3>{-0.1, -0.2, 0.05}, {0.08, 0.1, -0.06}, {-0.02, 0.0, 0.03}}) {
      const ModelParams p{eta};
      const State Ur = compose_fan(Ul, s, p).after3;
      const RiemannFan fan = solve_riemann(Ul, Ur, p);
      for (int i = 0; i < 3; ++i) CHECK(std::abs(fan.strengths[i] - s[i]) < 1e-10);
      CHECK(fan.residual <= 1e-12);
      const FanDiagnostics dg = check_fan(fan, p);
      CHECK(dg.valid);
      CHECK(dg.max_rh_residual <= 1e-12);
    }
  }
}

TEST_CASE("shocks in the fan satisfy the jump relations independently") {
  const ModelParams p{0.1};
  const State Ul{0.1, 0.3, -0.2};
  const State Ur = compose_fan(Ul, {-0.1, -0.2, 0.1}, p).after3;
  const RiemannFan fan = solve_riemann(Ul, Ur, p);
  REQUIRE(fan.waves.size() == 3);
  for (const Wave& w : fan.waves) {
    CHECK(w.kind == WaveKind::Shock);
    CHECK(oracle::rh_residual({w.left.u, w.left.v, w.left.w}, {w.right.u, w.right.v, w.right.w}, w.speed,
                              p.eta) <= 1e-12);
  }
  CHECK(fan.waves[0].speed < fan.waves[1].speed);
  CHECK(fan.waves[1].speed < fan.waves[2].speed);
}

TEST_CASE("identical states give no waves") {
  const State U{0.3, -0.2, 0.1};
  const RiemannFan fan = solve_riemann(U, U, {0.1});
  CHECK(fan.waves.empty());
  CHECK(fan.residual == 0.0);
  CHECK(evaluate_fan(fan, 0.3, {0.1}) == U);
}

TEST_CASE("precondition failures") {
  CHECK_THROWS_AS(solve_riemann({0.9, 0.5, 0.0}, {0.0, 0.0, 0.0}, {0.0}), DomainError);
  CHECK_THROWS_AS(solve_riemann({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.3}), DomainError);
  CHECK_THROWS_AS(solve_riemann({std::nan(""), 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0}), DomainError);
  RiemannOptions ro;
  ro.tol = 1e-30;
  CHECK_THROWS_AS(solve_riemann({0.1, 0.2, 0.3}, {-0.2, 0.1, 0.25}, {0.1}, ro), ConvergenceError);
}

TEST_CASE("linearly degenerate fields carry contacts at eta = 0") {
  CHECK(classify_wave(Family::One, 0.1, {0.0}) == WaveKind::Contact);
  CHECK(classify_wave(Family::Three, -0.1, {0.0}) == WaveKind::Contact);
  CHECK(classify_wave(Family::Two, -0.1, {0.0}) == WaveKind::Shock);
  CHECK(classify_wave(Family::Two, 0.1, {0.0}) == WaveKind::Rarefaction);
  CHECK(classify_wave(Family::One, 0.1, {0.01}) == WaveKind::Rarefaction);
  CHECK(classify_wave(Family::Three, 0.1, {0.01}) == WaveKind::Shock);
}

TEST_CASE("self-similar evaluation across a rarefaction") {
  const ModelParams p{0.05};
  const State Ul{0.0, -0.2, 0.0};
  const State Ur = compose_fan(Ul, {0.0, 0.3, 0.0}, p).after3;
  const RiemannFan fan = solve_riemann(Ul, Ur, p);
  REQUIRE(fan.waves.size() == 1);
  const Wave& w = fan.waves[0];
  CHECK(w.kind == WaveKind::Rarefaction);
  CHECK(w.speed_lo == doctest::Approx(-0.4));
  CHECK(w.speed_hi == doctest::Approx(0.2));
  CHECK(evaluate_fan(fan, -1.0, p) == Ul);
  CHECK(evaluate_fan(fan, 1.0, p) == fan.waves.back().right);
  // Inside the fan lambda2 = 2v = xi.
  const State mid = evaluate_fan(fan, 0.0, p);
  CHECK(std::abs(2.0 * mid.v) < 1e-11);
  CHECK_THROWS_AS(evaluate_fan(fan, INFINITY, p), DomainError);
}

TEST_CASE("shock-shock data at eta = 0 reproduce the closed-form outgoing strengths") {
  const State Ul{0.0, 0.0, 0.0};
  const double s = -0.2, sigma = -0.1;
  const ModelParams p{0.0};
  const State Um = wave_fan_curve(Family::Two, Ul, s, p).state;
  const State Ur = wave_fan_curve(Family::One, Um, sigma, p).state;
  const RiemannFan fan = solve_riemann(Ul, Ur, p);
  const auto ref = oracle::closed_form_12(Ul.v, s, sigma);
  CHECK(fan.strengths[0] == doctest::Approx(ref[0]).epsilon(1e-12));
  CHECK(fan.strengths[0] == doctest::Approx(-0.0909090909090909).epsilon(1e-12));
  CHECK(fan.strengths[1] == doctest::Approx(s).epsilon(1e-15));
  CHECK(fan.strengths[2] == doctest::Approx(ref[1]).epsilon(1e-12));
  CHECK(fan.strengths[2] == doctest::Approx(0.008225108225108225).epsilon(1e-12));
}

TEST_CASE("check_fan flags a tampered fan without throwing") {
  const ModelParams p{0.05};
  const State Ul{0.25, 0.0, -0.25};
  const State Ur = compose_fan(Ul, {-0.1, -0.1, 0.1}, p).after3;
  RiemannFan fan = solve_riemann(Ul, Ur, p);
  fan.waves[1].speed += 0.5;
  fan.waves[1].speed_lo = fan.waves[1].speed_hi = fan.waves[1].speed;
  const FanDiagnostics dg = check_fan(fan, p);
  CHECK_FALSE(dg.valid);
  CHECK(dg.max_rh_residual > 1e-3);
}

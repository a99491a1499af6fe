#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bjw/errors.hpp"
#include "bjw/interactions.hpp"
#include "oracles.hpp"

using namespace bjw;

TEST_CASE("pattern strings") {
  CHECK(classify_pattern({-0.1, -0.1, 0.1}) == "SSS");
  CHECK(classify_pattern({0.1, -0.1, -0.1}) == "RSR");
  CHECK(classify_pattern({0.0, 0.2, 1e-15}, 1e-14) == "0R0");
}

TEST_CASE("two approaching second-family shocks give a shock triple") {
  Interaction22Scenario sc;
  sc.a = 0.25;
  sc.Ul = Interaction22Scenario::sharp(0.25);
  sc.s1 = -2e-3;
  sc.s2 = -1e-3;
  sc.eta = 1e-3;
  const InteractionReport r = interact_22(sc);
  CHECK(r.kind == "22");
  CHECK(r.pattern == "SSS");
  CHECK(r.pass());
  CHECK(r.outgoing[1] == doctest::Approx(-3e-3).epsilon(1e-12));
  REQUIRE(r.fitted_coeffs);
}

TEST_CASE("2-2 scenario validation") {
  Interaction22Scenario sc;
  sc.s1 = -1e-3;
  sc.s2 = -1e-3;
  CHECK_NOTHROW(sc.validate());
  sc.s1 = 1e-3;
  CHECK_THROWS_AS(sc.validate(), DomainError);
  sc.s1 = -1e-3;
  sc.eta = 0.1;
  CHECK_THROWS_AS(sc.validate(), DomainError);
  sc.eta = 0.0;
  sc.a = 0.6;
  CHECK_THROWS_AS(sc.validate(), DomainError);
  sc.a = 0.25;
  sc.Ul = {0.3, 0.0, -0.25};
  CHECK_THROWS_AS(sc.validate(), DomainError);
}

TEST_CASE("1-2 scenario validation") {
  Interaction12Scenario sc{{0.1, 0.1, 0.1}, -0.1, -0.1, 0.01};
  CHECK_NOTHROW(sc.validate());
  sc.s = -0.25;
  CHECK_THROWS_AS(sc.validate(), DomainError);
  sc.s = -0.1;
  sc.Ul = {0.5, 0.0, 0.0};
  CHECK_THROWS_AS(sc.validate(), DomainError);
  sc.Ul = {0.1, 0.1, 0.1};
  sc.eta = 0.2;
  CHECK_THROWS_AS(sc.validate(), DomainError);
}

TEST_CASE("closed-form 1-2 strengths") {
  const ClosedForm12 cf = closed_form_12_eta0({0.0, 0.0, 0.0}, -0.2, -0.1);
  CHECK(cf.sigma_p == doctest::Approx(-0.0909090909090909).epsilon(1e-14));
  CHECK(cf.tau_p == doctest::Approx(0.008225108225108225).epsilon(1e-14));
  for (double vl : {-0.4, 0.0, 0.3}) {
    for (double s : {-0.24, -0.1, -0.01}) {
      const ClosedForm12 c = closed_form_12_eta0({0.0, vl, 0.1}, s, -0.07);
      const auto ref = oracle::closed_form_12(vl, s, -0.07);
      CHECK(c.sigma_p == doctest::Approx(ref[0]).epsilon(1e-14));
      CHECK(c.tau_p == doctest::Approx(ref[1]).epsilon(1e-14));
      CHECK(c.ratio_sigma_bracketed);
      CHECK(c.ratio_tau_bracketed);
    }
  }
}

TEST_CASE("1-2 linear system: inverse and closed-form solution") {
  for (double vl : {-0.3, 0.0, 0.4}) {
    for (double s : {-0.2, -0.05}) {
      const double gamma = 2.0 * vl + s;
      const Mat2 A = matrix_a_12(vl, s, gamma);
      const Mat2 Ai = matrix_a_12_inverse(vl, s, gamma);
      const Mat2 I = multiply(A, Ai);
      CHECK(std::abs(I[0][0] - 1.0) < 1e-13);
      CHECK(std::abs(I[1][1] - 1.0) < 1e-13);
      CHECK(std::abs(I[0][1]) < 1e-13);
      CHECK(std::abs(I[1][0]) < 1e-13);
      const double sigma = -0.13;
      const auto ref = oracle::closed_form_12(vl, s, sigma);
      const Vec2 AX = mul(A, Vec2{ref[0], ref[1]});
      const Vec2 Y = rhs_y_12(vl, s, gamma, sigma);
      CHECK(std::abs(AX[0] - Y[0]) < 1e-13);
      CHECK(std::abs(AX[1] - Y[1]) < 1e-13);
    }
  }
}

TEST_CASE("fixed-point solution agrees with the Riemann solve") {
  const Interaction12Scenario sc{{0.2, -0.1, 0.15}, -0.15, -0.1, 0.05};
  const ContractionResult cr = contraction_solve_12(sc);
  const InteractionReport r = interact_12(sc);
  CHECK(std::abs(cr.x[0] - r.outgoing[0]) < 1e-10);
  CHECK(std::abs(cr.x[1] - r.outgoing[2]) < 1e-10);
  CHECK(cr.contraction_ratio < 0.5);
  CHECK(cr.in_ball);
  CHECK(r.pattern == "SSS");
  CHECK(r.pass());

  const Interaction12Scenario sc0{{0.2, -0.1, 0.15}, -0.15, -0.1, 0.0};
  const ContractionResult c0 = contraction_solve_12(sc0);
  CHECK(c0.x == c0.x0);
  const ClosedForm12 cf = closed_form_12_eta0(sc0.Ul, sc0.s, sc0.sigma);
  CHECK(c0.x0[0] == doctest::Approx(cf.sigma_p).epsilon(1e-13));
  CHECK(c0.x0[1] == doctest::Approx(cf.tau_p).epsilon(1e-13));
}

TEST_CASE("polynomial extrapolation is exact on polynomial data") {
  const std::vector<double> h{1.0, 0.5, 0.25};
  std::vector<double> c;
  for (double x : h) c.push_back(3.0 - 2.0 * x + 0.5 * x * x);
  double cond = 0.0;
  CHECK(extrapolate_to_zero(h, c, &cond) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(cond > 1.0);
  CHECK_THROWS_AS(extrapolate_to_zero({1.0, 1.0 + 1e-14, 0.5}, {1.0, 1.0, 1.0}), IllConditionedError);
}

TEST_CASE("cubic coefficient fit") {
  std::vector<std::array<double, 2>> pts;
  std::vector<double> vals;
  for (double a : {-0.1, -0.2, -0.3})
    for (double b : {-0.05, -0.15}) {
      pts.push_back({a, b});
      vals.push_back(1.7 * a * b * (a + b));
    }
  CHECK(fit_cubic_coefficient(pts, vals) == doctest::Approx(1.7).epsilon(1e-13));
  CHECK_THROWS_AS(fit_cubic_coefficient({{0.0, -0.1}, {-0.1, 0.1}}, {1.0, 1.0}), IllConditionedError);
}

TEST_CASE("Taylor fit at eta = 0 vanishes on the axes") {
  const TaylorFit tf = taylor_fit_22(0.25, 0.0, Interaction22Scenario::sharp(0.25),
                                     default_taylor_scales(0.25));
  CHECK(tf.scales.size() == 3);
  CHECK(tf.max_axis_value <= 1e-12);
  CHECK(std::isfinite(tf.c_sigma));
  CHECK(std::isfinite(tf.c_tau));
  CHECK(tf.extrapolation_condition < 1e12);
}

TEST_CASE("sampled 1-2 bound verification is deterministic and passes") {
  const auto a = verify_bounds_12(20, 1e-3, 7);
  const auto b = verify_bounds_12(20, 1e-3, 7);
  REQUIRE(a.size() == 20);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].error.empty());
    CHECK(a[i].report.pass());
    CHECK(a[i].report.outgoing == b[i].report.outgoing);
    CHECK(a[i].scenario.Ul.norm() < 0.5);
  }
}

TEST_CASE("hashed draws lie in [0, 1) and depend on every argument") {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double d = unit_draw(7, i, 0);
    CHECK(d >= 0.0);
    CHECK(d < 1.0);
  }
  CHECK(unit_draw(7, 1, 0) != unit_draw(8, 1, 0));
  CHECK(unit_draw(7, 1, 0) != unit_draw(7, 2, 0));
  CHECK(unit_draw(7, 1, 0) != unit_draw(7, 1, 1));
  const Interaction22Scenario sc = sample_22(7, 3, 0.25, 1e-2, 2.5e-3);
  CHECK_NOTHROW(sc.validate());
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "bjw/errors.hpp"
#include "bjw/flux.hpp"
#include "oracles.hpp"

using namespace bjw;

namespace {

oracle::V3 arr(const State& s) { return {s.u, s.v, s.w}; }

const State kStates[] = {{0.0, 0.0, 0.0},   {0.25, 0.0, -0.25}, {-0.3, 0.5, 0.2},
                         {0.6, -0.4, -0.3}, {0.1, 0.85, 0.05},  {-0.5, -0.6, 0.4}};

}  // namespace

TEST_CASE("flux matches the reference formula") {
  for (double eta : {0.0, 0.01, 0.2}) {
    for (const State& U : kStates) {
      const Vec3 F = flux(U, {eta});
      const auto ref = oracle::flux(arr(U), eta);
      for (int i = 0; i < 3; ++i) CHECK(F[i] == doctest::Approx(ref[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("perturbation is the eta coefficient of the flux") {
  const State U{0.3, -0.2, 0.4};
  const auto p = perturbation(U);
  const Vec3 f0 = flux(U, {0.0}), f1 = flux(U, {0.1});
  CHECK((f1.u - f0.u) / 0.1 == doctest::Approx(p[0]).epsilon(1e-12));
  CHECK((f1.w - f0.w) / 0.1 == doctest::Approx(p[1]).epsilon(1e-12));
  CHECK(f1.v == f0.v);
}

TEST_CASE("analytic jacobian agrees with hand partials and finite differences") {
  for (double eta : {0.0, 0.05, 0.24}) {
    for (const State& U : kStates) {
      const Mat3 J = jacobian(U, {eta});
      const auto Jh = oracle::jacobian(arr(U), eta);
      const auto Jf = oracle::jacobian_fd(arr(U), eta);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          CHECK(J[i][j] == doctest::Approx(Jh[i][j]).epsilon(1e-14).scale(1.0));
          CHECK(std::abs(J[i][j] - Jf[i][j]) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("eigenvalues at eta = 0 are -4, 2v, 4 and match polynomial roots") {
  for (const State& U : kStates) {
    const EigenSystem es = eigensystem(U, {0.0});
    CHECK(std::abs(es.lambda[0] + 4.0) <= 1e-12);
    CHECK(std::abs(es.lambda[1] - 2.0 * U.v) <= 1e-12);
    CHECK(std::abs(es.lambda[2] - 4.0) <= 1e-12);
    const auto roots = oracle::char_roots(oracle::jacobian(arr(U), 0.0));
    REQUIRE(roots.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(roots[i] - es.lambda[i]) < 1e-9);
  }
}

TEST_CASE("eigenvalues for eta > 0 follow the factorized closed forms") {
  for (double eta : {1e-3, 0.1, 0.2}) {
    for (const State& U : kStates) {
      const double u = U.u, v = U.v, w = U.w;
      const EigenSystem es = eigensystem(U, {eta});
      CHECK(es.lambda[0] == doctest::Approx(-4.0 + 2.0 * eta * (w - u * v + 2.0 * u)).epsilon(1e-13));
      CHECK(es.lambda[2] == doctest::Approx(4.0 + 2.0 * eta * (w - u * v)).epsilon(1e-13));
      const auto roots = oracle::char_roots(oracle::jacobian(arr(U), eta));
      REQUIRE(roots.size() == 3);
      for (int i = 0; i < 3; ++i) CHECK(std::abs(roots[i] - es.lambda[i]) < 1e-9);
    }
  }
}

TEST_CASE("eigenvectors satisfy J r = lambda r") {
  for (double eta : {0.0, 0.01, 0.2}) {
    for (const State& U : kStates) {
      const EigenSystem es = eigensystem(U, {eta});
      const Mat3 J = jacobian(U, {eta});
      for (int i = 0; i < 3; ++i) {
        CHECK((mul(J, es.rvec[i]) - es.lambda[i] * es.rvec[i]).norm() <= 1e-10);
        CHECK(es.rvec[i].norm() > 0.5);
      }
      CHECK(es.rvec[0] == Vec3{1.0, 0.0, U.v});
      CHECK(es.rvec[2] == Vec3{1.0, 0.0, U.v - 2.0});
    }
  }
}

TEST_CASE("eigensystem errors") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(eigensystem({nan, 0.0, 0.0}, {0.0}), DomainError);
  // 2v = 4 collides with the third speed at eta = 0.
  CHECK_THROWS_AS(eigensystem({0.0, 2.0, 0.0}, {0.0}), HyperbolicityError);
  CHECK_THROWS_AS(characteristic_speed(4, {0.0, 0.0, 0.0}, {0.0}), DomainError);
  CHECK_FALSE(eigensystem({0.9, 0.9, 0.0}, {0.0}).in_unit_ball);
}

TEST_CASE("model parameter range") {
  CHECK_NOTHROW(ModelParams{0.0}.validate());
  CHECK_NOTHROW(ModelParams{0.2499}.validate());
  CHECK_THROWS_AS(ModelParams{0.25}.validate(), DomainError);
  CHECK_THROWS_AS(ModelParams{-1e-9}.validate(), DomainError);
  CHECK_THROWS_AS(ModelParams{std::nan("")}.validate(), DomainError);
}

TEST_CASE("halton points stay inside the ball") {
  for (std::uint64_t k = 1; k < 2000; ++k) CHECK(halton_ball_point(k, 0.9).norm() <= 0.9);
}

TEST_CASE("strict hyperbolicity sweep") {
  for (double eta : {0.0, 0.01, 0.2}) {
    const auto rep = check_strict_hyperbolicity({eta}, 0.9, 2000);
    CHECK(rep.pass);
    CHECK(rep.failures == 0);
    CHECK(rep.min_gap12 > 1.0);
    CHECK(rep.min_gap23 > 1.0);
  }
  CHECK_THROWS_AS(check_strict_hyperbolicity({0.3}, 0.9, 10), DomainError);
  CHECK_THROWS_AS(check_strict_hyperbolicity({0.1}, 1.0, 10), DomainError);
}

TEST_CASE("genuine nonlinearity: 4 eta, 2 and -4 eta along the fields") {
  for (double eta : {0.01, 0.1, 0.2}) {
    const auto rep = check_genuine_nonlinearity({eta}, 0.9, 500);
    CHECK(rep.pass);
    CHECK(rep.min_value[0] == doctest::Approx(4.0 * eta).epsilon(1e-6));
    CHECK(rep.max_value[0] == doctest::Approx(4.0 * eta).epsilon(1e-6));
    CHECK(rep.min_value[1] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(rep.max_value[2] == doctest::Approx(-4.0 * eta).epsilon(1e-6));
  }
  const auto degenerate = check_genuine_nonlinearity({0.0}, 0.9, 200);
  CHECK_FALSE(degenerate.family_pass[0]);
  CHECK(degenerate.family_pass[1]);
  CHECK_FALSE(degenerate.family_pass[2]);
}

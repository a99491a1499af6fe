#ifndef BJW_FLUX_HPP_
#define BJW_FLUX_HPP_

#include <array>
#include <cstdint>

#include "bjw/state.hpp"

namespace bjw {

/// Residual tolerance for eigenpairs, ||DF r - lambda r||.
inline constexpr double kTolEig = 1e-10;
/// Central-difference step for gradients of characteristic speeds.
inline constexpr double kGradientStep = 1e-5;

/// Perturbation terms (p1, p3) multiplying eta in the first and third flux
/// components.
std::array<double, 2> perturbation(const State& U);

/// F_eta(U). Throws DomainError for non-finite input.
Vec3 flux(const State& U, const ModelParams& p);

/// Exact Jacobian DF_eta(U); row 2 is (0, 2v, 0).
Mat3 jacobian(const State& U, const ModelParams& p);

/// The (u, w) block of F_0 is linear in (u, w): F0_hat(U) = J_hat(v) (u, w).
Mat2 jhat(double v);

struct EigenSystem {
  std::array<double, 3> lambda{};  // ascending
  std::array<Vec3, 3> rvec{};      // r2 has v-component 1
  bool in_unit_ball = true;
};

/// Eigenvalues and right eigenvectors of DF_eta(U).
///
/// The second row of the Jacobian is (0, 2v, 0), so the characteristic
/// polynomial factors as (2v - lambda) q(lambda) with q the characteristic
/// polynomial of the (u, w) block. Roots come from that factorization and are
/// Newton-polished on the full cubic. r1 = (1, 0, v) and r3 = (1, 0, v - 2)
/// are used whenever their residual is below kTolEig; otherwise a null vector
/// of DF - lambda I is computed.
///
/// Throws HyperbolicityError when the eigenvalues are not real and distinct.
/// States outside the unit ball are accepted and flagged via in_unit_ball.
EigenSystem eigensystem(const State& U, const ModelParams& p);

/// lambda_i(U) for family i in {1, 2, 3}.
double characteristic_speed(int family, const State& U, const ModelParams& p);

/// Deterministic Halton points in the closed ball of the given radius.
/// Point k uses Halton index seed + k + 1 in bases 2, 3, 5.
State halton_ball_point(std::uint64_t index, double radius);

struct HyperbolicityReport {
  double eta = 0.0;
  double radius = 0.0;
  int n_samples = 0;
  double min_gap12 = 0.0;  // min over samples of lambda2 - lambda1
  double min_gap23 = 0.0;  // min over samples of lambda3 - lambda2
  std::array<double, 3> lambda_min{};
  std::array<double, 3> lambda_max{};
  int failures = 0;  // samples where the eigen-solve threw
  bool pass = false;
};

HyperbolicityReport check_strict_hyperbolicity(const ModelParams& p, double radius,
                                               int n_samples, std::uint64_t seed = 0);

struct NonlinearityReport {
  double eta = 0.0;
  double radius = 0.0;
  int n_samples = 0;
  /// min / max over samples of grad(lambda_i) . r_i, central differences.
  std::array<double, 3> min_value{};
  std::array<double, 3> max_value{};
  /// Family 1, 2: min > margin. Family 3 uses the reversed orientation of
  /// r3: max < -margin.
  std::array<bool, 3> family_pass{};
  bool pass = false;
};

inline constexpr double kNonlinearityMargin = 1e-6;

NonlinearityReport check_genuine_nonlinearity(const ModelParams& p, double radius,
                                              int n_samples, std::uint64_t seed = 0);

}  // namespace bjw

#endif  // BJW_FLUX_HPP_

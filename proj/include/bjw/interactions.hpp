#ifndef BJW_INTERACTIONS_HPP_
#define BJW_INTERACTIONS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bjw/errors.hpp"
#include "bjw/riemann.hpp"
#include "bjw/state.hpp"

namespace bjw {

/// Two approaching 2-shocks near U_sharp = (a, 0, -a).
struct Interaction22Scenario {
  double a = 0.25;
  State Ul{0.25, 0.0, -0.25};
  double s1 = 0.0;
  double s2 = 0.0;
  double eta = 0.0;
  double eps = 1e-2;

  static State sharp(double a) { return {a, 0.0, -a}; }
  /// Throws DomainError unless 0 < a < 1/2, |Ul - U_sharp| <= eps a,
  /// s1, s2 in [-eps a, 0] and eta in [0, eps a].
  void validate() const;
};

/// A 2-shock (left) hit by a 1-shock (right).
struct Interaction12Scenario {
  State Ul;
  double s = 0.0;
  double sigma = 0.0;
  double eta = 0.0;
  /// Upper bound on eta accepted by validate().
  double eps = 0.1;

  /// Throws DomainError unless |Ul| < 1/2, s, sigma in (-1/4, 0] and
  /// eta in [0, eps].
  void validate() const;
};

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct InteractionReport {
  std::string kind;  // "22" or "12"
  std::vector<double> incoming;
  std::array<double, 3> outgoing{};  // (sigma, s_mid, tau)
  std::string pattern;  // per family: S shock side, R rarefaction side, 0 absent
  double residual = 0.0;
  std::vector<BoundCheck> bound_checks;
  /// Observed sigma / (s1 s2 (s1 + s2)) and tau / (s1 s2 (s1 + s2)), 2-2 only.
  std::optional<std::array<double, 2>> fitted_coeffs;

  bool pass() const;
};

/// Pattern string from signed strengths under the wave-curve sign convention.
/// |s| <= zero_tol counts as absent.
std::string classify_pattern(const std::array<double, 3>& s, double zero_tol = 0.0);

/// Outgoing fan of D2[s2, D2[s1, Ul]] against Ul, without scenario checks.
RiemannFan outgoing_22(const State& Ul, double s1, double s2, const ModelParams& p,
                       const RiemannOptions& opts = {});

InteractionReport interact_22(const Interaction22Scenario& sc, const RiemannOptions& opts = {});

struct TaylorFit {
  std::vector<double> scales;
  std::vector<double> c_sigma_per_scale;
  std::vector<double> c_tau_per_scale;
  double c_sigma = 0.0;  // extrapolated to zero scale
  double c_tau = 0.0;
  /// G with (sigma, tau) ~ G (u, w) s1 s2 (s1 + s2); fitted from the probes
  /// (u, v, 0) and (0, v, w) of Ul.
  std::vector<Mat2> g_per_scale;
  Mat2 g_matrix{};
  /// Largest |sigma|, |tau| along the axes s1 = 0 or s2 = 0.
  double max_axis_value = 0.0;
  double extrapolation_condition = 0.0;
};

inline constexpr int kTaylorStencil = 5;

/// Fits the cubic coefficients of the 2-2 interaction by least squares on
/// the single monomial s1 s2 (s1 + s2) over a 5x5 stencil of negative
/// strengths at each scale, then extrapolates polynomially to zero scale.
/// Throws IllConditionedError for a degenerate stencil or extrapolation.
TaylorFit taylor_fit_22(double a, double eta, const State& Ul, const std::vector<double>& scales,
                        const RiemannOptions& opts = {});

/// Default scales {1e-2, 5e-3, 2.5e-3} * a.
std::vector<double> default_taylor_scales(double a);

/// Least-squares coefficient of f ~ c s1 s2 (s1 + s2) on the given samples.
/// Throws IllConditionedError if the monomial vanishes on all samples.
double fit_cubic_coefficient(const std::vector<std::array<double, 2>>& points,
                             const std::vector<double>& values);

/// Polynomial extrapolation to h = 0 through (h_k, c_k). Reports the condition
/// number of the scaled Vandermonde matrix; throws above 1e12.
double extrapolate_to_zero(const std::vector<double>& h, const std::vector<double>& c,
                           double* condition = nullptr);

struct ClosedForm12 {
  double sigma_p = 0.0;
  double tau_p = 0.0;
  double gamma = 0.0;
  double ratio_sigma = 0.0;  // 2 / (2 - s)
  double ratio_tau = 0.0;    // (gamma + 4) / ((4 - gamma)(2 - s))
  bool ratio_sigma_bracketed = false;  // 2/3 < ratio_sigma < 1
  bool ratio_tau_bracketed = false;    // 1/21 < ratio_tau < 4
};

/// Outgoing 1- and 3-strengths at eta = 0 in closed form.
ClosedForm12 closed_form_12_eta0(const State& Ul, double s, double sigma);

/// Linear system A X = Y of the 1-2 interaction at eta = 0.
Mat2 matrix_a_12(double vl, double s, double gamma);
Mat2 matrix_a_12_inverse(double vl, double s, double gamma);
Vec2 rhs_y_12(double vl, double s, double gamma, double sigma);

/// Nonlinear remainder F(X) = p(U''_m) - p(U_m) - p(U'_m) + p(Ul) with
/// U_m = D2[s, Ul], U'_m = D1[sigma', Ul], U''_m = D3[-tau', D1[sigma, U_m]].
Vec2 remainder_12(const Vec2& X, const State& Ul, double s, double sigma, const ModelParams& p);

struct ContractionOptions {
  double step_tol = 1e-14;
  int max_iter = 100;
  /// Radius constant k of the ball |X - X0| <= k eta |sigma s|. Defaults to
  /// 1 / eta (the largest k with k eta <= 1).
  std::optional<double> ball_k;
};

struct ContractionResult {
  Vec2 x{};
  Vec2 x0{};
  int iterations = 0;
  double contraction_ratio = 0.0;  // largest observed step ratio
  double empirical_k = 0.0;        // max |X_n - X0| / (eta |sigma s|)
  bool in_ball = true;
  std::vector<Vec2> trace;
};

class ContractionError : public ConvergenceError {
 public:
  ContractionError(const std::string& what, double ratio, std::vector<Vec2> trace)
      : ConvergenceError(what, ratio, static_cast<int>(trace.size())), trace_(std::move(trace)) {}
  const std::vector<Vec2>& trace() const { return trace_; }

 private:
  std::vector<Vec2> trace_;
};

/// Fixed-point iteration X <- X0 - eta A^{-1} F(X) from X0.
/// Throws ContractionError when successive steps stop shrinking.
ContractionResult contraction_solve_12(const Interaction12Scenario& sc,
                                       const ContractionOptions& opts = {});

/// Forward-composes D1[sigma, D2[s, Ul]] and solves the outgoing Riemann problem.
InteractionReport interact_12(const Interaction12Scenario& sc, const RiemannOptions& opts = {});

inline constexpr double kOracleAgreementTol = 1e-9;
inline constexpr double kContractionRatioMax = 0.5;

struct Bounds12Row {
  int id = 0;
  Interaction12Scenario scenario;
  InteractionReport report;
  std::optional<ContractionResult> contraction;
  std::string error;  // non-empty when a solve failed
};

/// Samples scenarios in the hypothesis box (|Ul| < 1/2, s, sigma in
/// (-1/4, 0)) and checks the strength bounds, the shock pattern, agreement
/// with the fixed-point solver and its contraction ratio.
std::vector<Bounds12Row> verify_bounds_12(int n_samples, double eta, std::uint64_t seed);

/// Draws a 2-2 scenario uniformly from its box (Ul in the ball of radius
/// eps a around U_sharp, s_i in [-eps a, 0), eta in [0, eta_max]).
Interaction22Scenario sample_22(std::uint64_t seed, int index, double a, double eps,
                                double eta_max);

/// Uniform double in [0, 1) from a splitmix-style hash of (seed, index, slot).
double unit_draw(std::uint64_t seed, std::uint64_t index, std::uint64_t slot);

}  // namespace bjw

#endif  // BJW_INTERACTIONS_HPP_

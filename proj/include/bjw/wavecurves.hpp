#ifndef BJW_WAVECURVES_HPP_
#define BJW_WAVECURVES_HPP_

#include <iosfwd>

#include "bjw/state.hpp"

namespace bjw {

enum class Family : int { One = 1, Two = 2, Three = 3 };

inline constexpr int index(Family f) { return static_cast<int>(f); }
/// Throws DomainError unless i is 1, 2 or 3.
Family family_from_index(int i);
std::ostream& operator<<(std::ostream& os, Family f);

/// Shock side of the signed-strength convention: families 1 and 2 are shocks
/// for s < 0, family 3 (reversed orientation of r3) for s > 0.
constexpr bool is_shock_side(Family f, double s) {
  return f == Family::Three ? s > 0.0 : s < 0.0;
}

/// Families 1 and 3 are linearly degenerate at eta = 0.
constexpr bool linearly_degenerate(Family f, const ModelParams& p) {
  return p.eta == 0.0 && f != Family::Two;
}

struct CurvePoint {
  State state;
  double speed = 0.0;   // shock speed, or lambda_i at the state for rarefactions
  double param = 0.0;   // signed strength
  double rh_residual = 0.0;  // ||F(S) - F(base) - speed (S - base)||, shocks only
  int iterations = 0;
  bool domain_warning = false;  // |state| >= 1
  bool range_warning = false;   // family 2: |2 vbar + s| >= 3
};

struct CurveOptions {
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
};

/// E(vbar, s) such that the (u, w) part of the 2-Hugoniot locus at eta = 0 is
/// (I + E) (ubar, wbar). Throws SingularMatrixError when |2 vbar + s| >= 4.
Mat2 hugoniot_matrix_e(double vbar, double s);

/// Closed-form 2-Hugoniot locus at eta = 0; speed 2 vbar + s.
CurvePoint hugoniot2_closed_form(const State& base, double s);

/// ||F(right) - F(left) - speed (right - left)||.
double rh_residual(const State& left, const State& right, double speed, const ModelParams& p);

/// Hugoniot locus of the given family.
///
/// Families 1 and 3 lie on the straight line base + s r(base) in the plane
/// v = vbar; the speed is the least-squares fit of the Rankine-Hugoniot
/// relation. Family 2 solves the Rankine-Hugoniot system by Newton in
/// (u, w, speed) with v pinned to vbar + s, starting from the eta = 0 closed
/// form. Throws ConvergenceError if Newton stalls above the tolerance.
CurvePoint hugoniot(Family fam, const State& base, double s, const ModelParams& p,
                    const CurveOptions& opts = {});

/// Integral curve of r_fam through base. Families 1 and 3 are straight lines;
/// family 2 is integrated with fixed-step RK4 in the v-parametrization
/// (v-component exactly vbar + s).
CurvePoint rarefaction(Family fam, const State& base, double s, const ModelParams& p);

/// Wave fan curve D_fam[s, base]: shock branch on the shock side of the sign
/// convention, rarefaction branch otherwise.
CurvePoint wave_fan_curve(Family fam, const State& base, double s, const ModelParams& p,
                          const CurveOptions& opts = {});

inline constexpr double kTolLax = 1e-10;

struct LaxCheck {
  bool admissible = false;
  double margin_behind = 0.0;  // speed - lambda_fam(right)
  double margin_ahead = 0.0;   // lambda_fam(left) - speed
  /// Separation from the neighbouring families: speed - lambda_{fam-1}(left)
  /// and lambda_{fam+1}(right) - speed (+inf when there is no neighbour).
  double margin_lower_family = 0.0;
  double margin_upper_family = 0.0;
};

/// lambda_fam(right) <= speed <= lambda_fam(left) within kTolLax, and the
/// speed strictly separated from the neighbouring characteristic families.
LaxCheck lax_admissible(Family fam, const State& left, const State& right, double speed,
                        const ModelParams& p);

}  // namespace bjw

#endif  // BJW_WAVECURVES_HPP_

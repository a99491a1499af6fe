#ifndef BJW_RIEMANN_HPP_
#define BJW_RIEMANN_HPP_

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "bjw/state.hpp"
#include "bjw/wavecurves.hpp"

namespace bjw {

enum class WaveKind { Shock, Rarefaction, Contact };

std::string to_string(WaveKind k);
std::ostream& operator<<(std::ostream& os, WaveKind k);

/// Kind of a wave of the given family and signed strength. Linearly degenerate
/// fields (families 1 and 3 at eta = 0) carry contacts.
WaveKind classify_wave(Family fam, double strength, const ModelParams& p);

struct Wave {
  Family family = Family::One;
  WaveKind kind = WaveKind::Shock;
  double strength = 0.0;
  State left;
  State right;
  double speed = 0.0;     // shock / contact speed
  double speed_lo = 0.0;  // rarefaction: lambda at left; otherwise = speed
  double speed_hi = 0.0;  // rarefaction: lambda at right; otherwise = speed
};

struct RiemannFan {
  State left_state;
  State right_state;
  std::vector<Wave> waves;  // ascending speeds, zero-strength waves dropped
  std::array<double, 3> strengths{};
  double residual = 0.0;  // ||D3[s3, D2[s2, D1[s1, Ul]]] - Ur||
  int iterations = 0;
};

struct RiemannOptions {
  double tol = 1e-12;
  int max_iter = 100;
  double tol_zero = 1e-13;
  /// Reject states with |U| >= 1. Interaction studies with larger transient
  /// states switch this off.
  bool require_unit_ball = true;
  CurveOptions curve;
};

/// Lax solution of the Riemann problem (Ul, Ur).
///
/// The middle strength is assigned as s2 = v_r - v_l (v is constant along the
/// first and third wave curves). The remaining (s1, s3) solve a 2x2 system in
/// the (u, w) components by damped Newton with a central-difference Jacobian.
/// Throws DomainError for states outside the unit ball and ConvergenceError
/// when the residual stays above tol.
RiemannFan solve_riemann(const State& Ul, const State& Ur, const ModelParams& p,
                         const RiemannOptions& opts = {});

/// D3[s3, D2[s2, D1[s1, Ul]]] together with the two intermediate states.
struct Composition {
  State after1;
  State after2;
  State after3;
};
Composition compose_fan(const State& Ul, const std::array<double, 3>& s, const ModelParams& p,
                        const CurveOptions& opts = {});

/// Builds the wave list for given strengths (no dropping).
std::vector<Wave> build_waves(const State& Ul, const std::array<double, 3>& s,
                              const ModelParams& p, double tol_zero = 0.0,
                              const CurveOptions& opts = {});

/// Self-similar solution at xi = x / t. Throws DomainError for non-finite xi.
State evaluate_fan(const RiemannFan& fan, double xi, const ModelParams& p);

struct FanDiagnostics {
  double max_rh_residual = 0.0;
  double min_lax_margin = 0.0;  // most negative Lax margin over shocks (0 if none)
  bool speeds_ordered = true;
  bool states_chained = true;
  bool rarefactions_increasing = true;
  double composition_residual = 0.0;
  std::vector<std::string> problems;
  bool valid = true;
};

/// Recomputes residuals, Lax margins and ordering. Never throws.
FanDiagnostics check_fan(const RiemannFan& fan, const ModelParams& p);

}  // namespace bjw

#endif  // BJW_RIEMANN_HPP_

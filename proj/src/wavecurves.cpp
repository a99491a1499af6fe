#include "bjw/wavecurves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "bjw/errors.hpp"
#include "bjw/flux.hpp"

namespace bjw {

namespace {

constexpr double kSpeedWarn = 3.0;

Vec3 line_direction(Family fam, const State& base) {
  return fam == Family::One ? Vec3{1.0, 0.0, base.v} : Vec3{1.0, 0.0, base.v - 2.0};
}

void check_input(const State& base, double s) {
  if (!base.finite() || !std::isfinite(s)) throw DomainError("non-finite wave curve input");
}

Vec2 r2_hat(const State& U, const ModelParams& p) {
  const Vec3 r = eigensystem(U, p).rvec[1];
  return {r.u, r.w};
}

CurvePoint straight_line(Family fam, const State& base, double s) {
  CurvePoint cp;
  cp.state = base + s * line_direction(fam, base);
  cp.state.v = base.v;
  cp.param = s;
  cp.domain_warning = !(cp.state.norm() < 1.0);
  return cp;
}

}  // namespace

Family family_from_index(int i) {
  if (i < 1 || i > 3) throw DomainError("wave family must be 1, 2 or 3");
  return static_cast<Family>(i);
}

std::ostream& operator<<(std::ostream& os, Family f) { return os << index(f); }

Mat2 hugoniot_matrix_e(double vbar, double s) {
  const double g = 2.0 * vbar + s;
  if (!(std::abs(g) < 4.0)) {
    std::ostringstream os;
    os << "2-Hugoniot closed form singular: |2 vbar + s| = " << std::abs(g) << " >= 4";
    throw SingularMatrixError(os.str());
  }
  const double f = 4.0 * s / (g * g - 16.0);
  return {{{f * (s + 4.0 - 2.0 * vbar), f * 4.0},
           {f * ((s + 4.0) * (s - 2.0) + 4.0 * vbar), f * (3.0 * s - 4.0 + 2.0 * vbar)}}};
}

CurvePoint hugoniot2_closed_form(const State& base, double s) {
  check_input(base, s);
  const Mat2 E = hugoniot_matrix_e(base.v, s);
  const Vec2 uh{base.u, base.w};
  const Vec2 shift = mul(E, uh);
  CurvePoint cp;
  cp.state = {base.u + shift[0], base.v + s, base.w + shift[1]};
  cp.speed = 2.0 * base.v + s;
  cp.param = s;
  cp.rh_residual = rh_residual(base, cp.state, cp.speed, ModelParams{0.0});
  cp.domain_warning = !(cp.state.norm() < 1.0);
  cp.range_warning = std::abs(cp.speed) >= kSpeedWarn;
  return cp;
}

double rh_residual(const State& left, const State& right, double speed, const ModelParams& p) {
  return (flux(right, p) - flux(left, p) - speed * (right - left)).norm();
}

CurvePoint hugoniot(Family fam, const State& base, double s, const ModelParams& p,
                    const CurveOptions& opts) {
  check_input(base, s);
  if (fam != Family::Two) {
    CurvePoint cp = straight_line(fam, base, s);
    const Vec3 d = cp.state - base;
    const double dd = dot(d, d);
    if (dd == 0.0) {
      cp.speed = characteristic_speed(index(fam), base, p);
      return cp;
    }
    const Vec3 dF = flux(cp.state, p) - flux(base, p);
    cp.speed = dot(d, dF) / dd;
    cp.rh_residual = (dF - cp.speed * d).norm();
    return cp;
  }

  CurvePoint cp;
  cp.param = s;
  if (s == 0.0) {
    cp.state = base;
    cp.speed = 2.0 * base.v;
    return cp;
  }
  // Start from the eta = 0 locus; fall back to base if the closed form is singular.
  State S = base;
  S.v = base.v + s;
  double gamma = 2.0 * base.v + s;
  if (std::abs(gamma) < 4.0) {
    const CurvePoint guess = hugoniot2_closed_form(base, s);
    S = guess.state;
  }
  const Vec3 F0 = flux(base, p);
  auto residual_vec = [&](const State& X, double g) { return flux(X, p) - F0 - g * (X - base); };

  Vec3 R = residual_vec(S, gamma);
  double res = R.norm();
  int it = 0;
  int polish = 0;
  while (it < opts.newton_max_iter) {
    if (res == 0.0) break;
    if (res <= opts.newton_tol && polish >= 2) break;
    const Mat3 J = jacobian(S, p);
    Mat3 M{};
    M[0] = {J[0][0] - gamma, J[0][2], -(S.u - base.u)};
    M[1] = {J[1][0], J[1][2], -(S.v - base.v)};
    M[2] = {J[2][0], J[2][2] - gamma, -(S.w - base.w)};
    Vec3 dx{};
    if (!solve3(M, -1.0 * R, dx)) break;
    State trial = S;
    // dx holds (du, dw, dgamma).
    trial.u += dx.u;
    trial.w += dx.v;
    const double trial_gamma = gamma + dx.w;
    const Vec3 Rt = residual_vec(trial, trial_gamma);
    ++it;
    if (!(Rt.norm() < res)) break;
    S = trial;
    gamma = trial_gamma;
    R = Rt;
    res = Rt.norm();
    if (res <= opts.newton_tol) ++polish;
  }
  if (!(res <= opts.newton_tol)) {
    std::ostringstream os;
    os << "2-Hugoniot Newton did not converge from " << base << " with s = " << s;
    throw ConvergenceError(os.str(), res, it);
  }
  cp.state = S;
  cp.speed = gamma;
  cp.rh_residual = res;
  cp.iterations = it;
  cp.domain_warning = !(S.norm() < 1.0);
  cp.range_warning = std::abs(2.0 * base.v + s) >= kSpeedWarn;
  return cp;
}

CurvePoint rarefaction(Family fam, const State& base, double s, const ModelParams& p) {
  check_input(base, s);
  if (fam != Family::Two) {
    CurvePoint cp = straight_line(fam, base, s);
    cp.speed = characteristic_speed(index(fam), cp.state, p);
    return cp;
  }
  CurvePoint cp;
  cp.param = s;
  if (s == 0.0) {
    cp.state = base;
    cp.speed = 2.0 * base.v;
    return cp;
  }
  const double ode_step = std::min(std::abs(s) / 64.0, 1e-3);
  const int n = static_cast<int>(std::ceil(std::abs(s) / ode_step - 1e-9));
  const double h = s / n;
  Vec2 y{base.u, base.w};
  auto rhs = [&](double t, const Vec2& x) {
    return r2_hat(State{x[0], base.v + t, x[1]}, p);
  };
  for (int k = 0; k < n; ++k) {
    const double t = k * h;
    const Vec2 k1 = rhs(t, y);
    const Vec2 k2 = rhs(t + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
    const Vec2 k3 = rhs(t + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
    const Vec2 k4 = rhs(t + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
    y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
  }
  cp.state = {y[0], base.v + s, y[1]};
  cp.speed = 2.0 * cp.state.v;
  cp.iterations = n;
  cp.domain_warning = !(cp.state.norm() < 1.0);
  return cp;
}

CurvePoint wave_fan_curve(Family fam, const State& base, double s, const ModelParams& p,
                          const CurveOptions& opts) {
  return is_shock_side(fam, s) ? hugoniot(fam, base, s, p, opts) : rarefaction(fam, base, s, p);
}

LaxCheck lax_admissible(Family fam, const State& left, const State& right, double speed,
                        const ModelParams& p) {
  const auto el = eigensystem(left, p);
  const auto er = eigensystem(right, p);
  const int i = index(fam) - 1;
  LaxCheck lc;
  lc.margin_behind = speed - er.lambda[i];
  lc.margin_ahead = el.lambda[i] - speed;
  const double inf = std::numeric_limits<double>::infinity();
  lc.margin_lower_family = i > 0 ? speed - el.lambda[i - 1] : inf;
  lc.margin_upper_family = i < 2 ? er.lambda[i + 1] - speed : inf;
  lc.admissible = lc.margin_behind >= -kTolLax && lc.margin_ahead >= -kTolLax &&
                  lc.margin_lower_family > 0.0 && lc.margin_upper_family > 0.0;
  return lc;
}

}  // namespace bjw

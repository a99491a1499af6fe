#include "bjw/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "bjw/errors.hpp"
#include "bjw/flux.hpp"

namespace bjw {

namespace {

constexpr double kFdStep = 1e-7;
constexpr int kMaxHalvings = 40;
constexpr double kBisectionTol = 1e-12;
constexpr double kFanResidualTol = 1e-9;

Vec2 uw(const State& s) { return {s.u, s.w}; }
double norm2(const Vec2& x) { return std::hypot(x[0], x[1]); }

}  // namespace

std::string to_string(WaveKind k) {
  switch (k) {
    case WaveKind::Shock: return "shock";
    case WaveKind::Rarefaction: return "rarefaction";
    case WaveKind::Contact: return "contact";
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, WaveKind k) { return os << to_string(k); }

WaveKind classify_wave(Family fam, double strength, const ModelParams& p) {
  if (linearly_degenerate(fam, p)) return WaveKind::Contact;
  return is_shock_side(fam, strength) ? WaveKind::Shock : WaveKind::Rarefaction;
}

Composition compose_fan(const State& Ul, const std::array<double, 3>& s, const ModelParams& p,
                        const CurveOptions& opts) {
  Composition c;
  c.after1 = wave_fan_curve(Family::One, Ul, s[0], p, opts).state;
  c.after2 = wave_fan_curve(Family::Two, c.after1, s[1], p, opts).state;
  c.after3 = wave_fan_curve(Family::Three, c.after2, s[2], p, opts).state;
  return c;
}

std::vector<Wave> build_waves(const State& Ul, const std::array<double, 3>& s,
                              const ModelParams& p, double tol_zero, const CurveOptions& opts) {
  std::vector<Wave> waves;
  State current = Ul;
  for (int i = 0; i < 3; ++i) {
    const Family fam = family_from_index(i + 1);
    const CurvePoint cp = wave_fan_curve(fam, current, s[i], p, opts);
    if (std::abs(s[i]) > tol_zero) {
      Wave wv;
      wv.family = fam;
      wv.kind = classify_wave(fam, s[i], p);
      wv.strength = s[i];
      wv.left = current;
      wv.right = cp.state;
      if (wv.kind == WaveKind::Rarefaction) {
        wv.speed_lo = characteristic_speed(i + 1, wv.left, p);
        wv.speed_hi = characteristic_speed(i + 1, wv.right, p);
        wv.speed = wv.speed_lo;
      } else {
        wv.speed = wv.speed_lo = wv.speed_hi = cp.speed;
      }
      waves.push_back(wv);
    }
    current = cp.state;
  }
  return waves;
}

RiemannFan solve_riemann(const State& Ul, const State& Ur, const ModelParams& p,
                         const RiemannOptions& opts) {
  p.validate();
  if (!Ul.finite() || !Ur.finite()) throw DomainError("non-finite Riemann data");
  if (opts.require_unit_ball && !(Ul.norm() < 1.0 && Ur.norm() < 1.0)) {
    std::ostringstream os;
    os << "Riemann data outside the unit ball: |Ul| = " << Ul.norm() << ", |Ur| = " << Ur.norm();
    throw DomainError(os.str());
  }

  RiemannFan fan;
  fan.left_state = Ul;
  fan.right_state = Ur;
  const double s2 = Ur.v - Ul.v;

  const State mid = wave_fan_curve(Family::Two, Ul, s2, p, opts.curve).state;
  // Project Ur - D2[s2, Ul] on (r1, r3) at Ul; exact when the outer curves are lines.
  const Vec2 d = uw(Ur - mid);
  const double vl = Ul.v;
  Vec2 x{((vl - 2.0) * d[0] - d[1]) / -2.0, (d[1] - vl * d[0]) / -2.0};

  auto G = [&](const Vec2& y) {
    const State end = compose_fan(Ul, {y[0], s2, y[1]}, p, opts.curve).after3;
    return Vec2{end.u - Ur.u, end.w - Ur.w};
  };

  Vec2 g = G(x);
  double res = norm2(g);
  int it = 0;
  int polish = 0;
  while (it < opts.max_iter && res > 0.0) {
    if (res <= opts.tol && polish >= 2) break;
    Mat2 J{};
    for (int j = 0; j < 2; ++j) {
      const double h = kFdStep * std::max(1.0, std::abs(x[j]));
      Vec2 xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const Vec2 gp = G(xp), gm = G(xm);
      J[0][j] = (gp[0] - gm[0]) / (2.0 * h);
      J[1][j] = (gp[1] - gm[1]) / (2.0 * h);
    }
    if (determinant(J) == 0.0) break;
    const Vec2 step = mul(inverse(J), g);
    ++it;
    double lambda = 1.0;
    bool improved = false;
    for (int k = 0; k < kMaxHalvings; ++k) {
      const Vec2 trial{x[0] - lambda * step[0], x[1] - lambda * step[1]};
      const Vec2 gt = G(trial);
      if (norm2(gt) < res) {
        x = trial;
        g = gt;
        res = norm2(gt);
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) break;
    if (res <= opts.tol) ++polish;
  }
  fan.iterations = it;
  fan.strengths = {x[0], s2, x[1]};
  const State end = compose_fan(Ul, fan.strengths, p, opts.curve).after3;
  fan.residual = distance(end, Ur);
  if (!(res <= opts.tol)) {
    std::ostringstream os;
    os << "Riemann solve did not converge: residual " << res << " after " << it
       << " iterations, best strengths (" << x[0] << ", " << s2 << ", " << x[1] << ")";
    throw ConvergenceError(os.str(), res, it);
  }
  fan.waves = build_waves(Ul, fan.strengths, p, opts.tol_zero, opts.curve);
  return fan;
}

State evaluate_fan(const RiemannFan& fan, double xi, const ModelParams& p) {
  if (!std::isfinite(xi)) throw DomainError("similarity variable must be finite");
  for (const Wave& wv : fan.waves) {
    if (wv.kind != WaveKind::Rarefaction) {
      if (xi < wv.speed) return wv.left;
      continue;
    }
    if (xi < wv.speed_lo) return wv.left;
    if (xi > wv.speed_hi) continue;
    // lambda is monotone along the curve; bisect on the curve parameter.
    double lo = 0.0, hi = wv.strength;
    State at = wv.left;
    while (std::abs(hi - lo) > kBisectionTol) {
      const double mid = 0.5 * (lo + hi);
      at = rarefaction(wv.family, wv.left, mid, p).state;
      if (characteristic_speed(index(wv.family), at, p) < xi) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return rarefaction(wv.family, wv.left, 0.5 * (lo + hi), p).state;
  }
  return fan.waves.empty() ? fan.left_state : fan.waves.back().right;
}

FanDiagnostics check_fan(const RiemannFan& fan, const ModelParams& p) {
  FanDiagnostics dg;
  auto flag = [&](const std::string& msg) {
    dg.problems.push_back(msg);
    dg.valid = false;
  };
  try {
    for (std::size_t k = 0; k < fan.waves.size(); ++k) {
      const Wave& wv = fan.waves[k];
      if (k + 1 < fan.waves.size()) {
        const Wave& nx = fan.waves[k + 1];
        if (!(wv.right == nx.left)) {
          dg.states_chained = false;
          flag("adjacent waves do not share a state");
        }
        if (!(wv.speed_hi < nx.speed_lo)) {
          dg.speeds_ordered = false;
          flag("wave speeds not strictly increasing");
        }
      }
      if (wv.kind == WaveKind::Rarefaction) {
        if (!(wv.speed_lo < wv.speed_hi)) {
          dg.rarefactions_increasing = false;
          flag("rarefaction speed interval not increasing");
        }
        continue;
      }
      const double r = rh_residual(wv.left, wv.right, wv.speed, p);
      dg.max_rh_residual = std::max(dg.max_rh_residual, r);
      if (r > kFanResidualTol) flag("Rankine-Hugoniot residual above tolerance");
      if (wv.kind == WaveKind::Shock) {
        const LaxCheck lc = lax_admissible(wv.family, wv.left, wv.right, wv.speed, p);
        dg.min_lax_margin = std::min({dg.min_lax_margin, lc.margin_behind, lc.margin_ahead});
        if (!lc.admissible) flag("shock violates the Lax condition");
      }
    }
    if (!fan.waves.empty()) {
      const State end = compose_fan(fan.left_state, fan.strengths, p).after3;
      dg.composition_residual = distance(end, fan.right_state);
      if (dg.composition_residual > kFanResidualTol) flag("strengths do not reproduce the right state");
    }
  } catch (const std::exception& e) {
    flag(std::string("evaluation failed: ") + e.what());
  }
  return dg;
}

}  // namespace bjw

#include "bjw/interactions.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

#include "bjw/flux.hpp"
#include "bjw/wavecurves.hpp"

namespace bjw {

namespace {

double cubic_monomial(double s1, double s2) { return s1 * s2 * (s1 + s2); }

Vec2 sub(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
double norm2(const Vec2& x) { return std::hypot(x[0], x[1]); }

BoundCheck le(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, rhs, lhs <= rhs};
}

// Rounding of v_r - v_l when the v-bookkeeping passes through intermediate sums.
bool additive(double got, double expected, double vl) {
  const double slack = 4.0 * DBL_EPSILON * (std::abs(vl) + std::abs(expected) + std::abs(got));
  return std::abs(got - expected) <= slack;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform point of the open unit ball by rejection, drawing from consecutive slots.
State unit_ball_draw(std::uint64_t seed, std::uint64_t index, std::uint64_t first_slot) {
  for (std::uint64_t slot = first_slot;; slot += 3) {
    const State x{2.0 * unit_draw(seed, index, slot) - 1.0,
                  2.0 * unit_draw(seed, index, slot + 1) - 1.0,
                  2.0 * unit_draw(seed, index, slot + 2) - 1.0};
    if (x.norm() < 1.0) return x;
  }
}

}  // namespace

double unit_draw(std::uint64_t seed, std::uint64_t index, std::uint64_t slot) {
  const std::uint64_t h = splitmix(splitmix(splitmix(seed) ^ index) ^ (slot * 0x632be59bd9b4e019ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

void Interaction22Scenario::validate() const {
  auto fail = [](const std::string& msg) { throw DomainError("2-2 scenario: " + msg); };
  if (!(a > 0.0 && a < 0.5)) fail("a must lie in (0, 1/2)");
  if (!(eps > 0.0)) fail("eps must be positive");
  if (!Ul.finite()) fail("non-finite left state");
  const double box = eps * a;
  if (!(distance(Ul, sharp(a)) <= box)) fail("|Ul - U_sharp| exceeds eps a");
  if (!(s1 >= -box && s1 <= 0.0) || !(s2 >= -box && s2 <= 0.0)) fail("strengths outside [-eps a, 0]");
  if (!(eta >= 0.0 && eta <= box)) fail("eta outside [0, eps a]");
}

void Interaction12Scenario::validate() const {
  auto fail = [](const std::string& msg) { throw DomainError("1-2 scenario: " + msg); };
  if (!Ul.finite() || !(Ul.norm() < 0.5)) fail("|Ul| must be below 1/2");
  if (!(s > -0.25 && s <= 0.0)) fail("s outside (-1/4, 0]");
  if (!(sigma > -0.25 && sigma <= 0.0)) fail("sigma outside (-1/4, 0]");
  if (!(eta >= 0.0 && eta <= eps && eta < ModelParams::kEtaMax)) fail("eta outside [0, eps]");
}

bool InteractionReport::pass() const {
  return std::all_of(bound_checks.begin(), bound_checks.end(),
                     [](const BoundCheck& b) { return b.pass; });
}

std::string classify_pattern(const std::array<double, 3>& s, double zero_tol) {
  std::string out;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(s[i]) <= zero_tol) {
      out += '0';
    } else {
      out += is_shock_side(family_from_index(i + 1), s[i]) ? 'S' : 'R';
    }
  }
  return out;
}

RiemannFan outgoing_22(const State& Ul, double s1, double s2, const ModelParams& p,
                       const RiemannOptions& opts) {
  const State Um = wave_fan_curve(Family::Two, Ul, s1, p, opts.curve).state;
  const State Ur = wave_fan_curve(Family::Two, Um, s2, p, opts.curve).state;
  return solve_riemann(Ul, Ur, p, opts);
}

InteractionReport interact_22(const Interaction22Scenario& sc, const RiemannOptions& opts) {
  sc.validate();
  const ModelParams p{sc.eta};
  const RiemannFan fan = outgoing_22(sc.Ul, sc.s1, sc.s2, p, opts);
  InteractionReport rep;
  rep.kind = "22";
  rep.incoming = {sc.s1, sc.s2};
  rep.outgoing = fan.strengths;
  rep.residual = fan.residual;
  rep.pattern = classify_pattern(fan.strengths);
  const double sigma = fan.strengths[0], mid = fan.strengths[1], tau = fan.strengths[2];
  const double sum = sc.s1 + sc.s2;
  rep.bound_checks.push_back({"sigma<0", sigma, 0.0, sigma < 0.0});
  rep.bound_checks.push_back({"tau>0", tau, 0.0, tau > 0.0});
  rep.bound_checks.push_back({"s_mid=s1+s2", mid, sum, additive(mid, sum, sc.Ul.v)});
  const double m = cubic_monomial(sc.s1, sc.s2);
  if (m != 0.0) rep.fitted_coeffs = std::array<double, 2>{sigma / m, tau / m};
  return rep;
}

double fit_cubic_coefficient(const std::vector<std::array<double, 2>>& points,
                             const std::vector<double>& values) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const double m = cubic_monomial(points[k][0], points[k][1]);
    num += m * values[k];
    den += m * m;
  }
  if (!(den > 0.0)) throw IllConditionedError("cubic monomial vanishes on the stencil", INFINITY);
  return num / den;
}

double extrapolate_to_zero(const std::vector<double>& h, const std::vector<double>& c,
                           double* condition) {
  const std::size_t n = h.size();
  if (n == 0 || c.size() != n) throw IllConditionedError("empty extrapolation data", INFINITY);
  const double hmax = *std::max_element(h.begin(), h.end());
  // Infinity-norm condition of the scaled Vandermonde matrix via its inverse.
  std::vector<std::vector<double>> V(n, std::vector<double>(n)), Inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    double x = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      V[i][j] = x;
      x *= h[i] / hmax;
    }
    Inv[i][i] = 1.0;
  }
  double norm_v = 0.0;
  for (const auto& row : V) {
    double r = 0.0;
    for (double x : row) r += std::abs(x);
    norm_v = std::max(norm_v, r);
  }
  auto W = V;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(W[r][col]) > std::abs(W[piv][col])) piv = r;
    if (W[piv][col] == 0.0) throw IllConditionedError("repeated extrapolation scales", INFINITY);
    std::swap(W[piv], W[col]);
    std::swap(Inv[piv], Inv[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = W[r][col] / W[col][col];
      for (std::size_t k = 0; k < n; ++k) {
        W[r][k] -= f * W[col][k];
        Inv[r][k] -= f * Inv[col][k];
      }
    }
  }
  double norm_inv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t k = 0; k < n; ++k) r += std::abs(Inv[i][k] / W[i][i]);
    norm_inv = std::max(norm_inv, r);
  }
  const double cond = norm_v * norm_inv;
  if (condition) *condition = cond;
  if (!(cond < 1e12)) {
    std::ostringstream os;
    os << "extrapolation ill-conditioned (condition " << cond << ")";
    throw IllConditionedError(os.str(), cond);
  }
  // Neville's scheme evaluated at h = 0.
  std::vector<double> P = c;
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double hi = h[i], hj = h[i + level];
      P[i] = (hj * P[i] - hi * P[i + 1]) / (hj - hi);
    }
  }
  return P[0];
}

std::vector<double> default_taylor_scales(double a) { return {1e-2 * a, 5e-3 * a, 2.5e-3 * a}; }

TaylorFit taylor_fit_22(double a, double eta, const State& Ul, const std::vector<double>& scales,
                        const RiemannOptions& opts) {
  const ModelParams p{eta};
  p.validate();
  if (!(a > 0.0 && a < 0.5)) throw DomainError("a must lie in (0, 1/2)");
  if (scales.empty()) throw IllConditionedError("no fit scales", INFINITY);
  const bool g_probes = Ul.u != 0.0 && Ul.w != 0.0;
  const State probe_u{Ul.u, Ul.v, 0.0};
  const State probe_w{0.0, Ul.v, Ul.w};

  TaylorFit fit;
  fit.scales = scales;
  std::vector<double> g00, g01, g10, g11;
  for (double h : scales) {
    if (!(h > 0.0)) throw IllConditionedError("fit scales must be positive", INFINITY);
    std::vector<std::array<double, 2>> pts;
    std::vector<double> sig, tau, sig_u, tau_u, sig_w, tau_w;
    for (int i = 1; i <= kTaylorStencil; ++i) {
      for (int j = 1; j <= kTaylorStencil; ++j) {
        const double s1 = -h * i / kTaylorStencil;
        const double s2 = -h * j / kTaylorStencil;
        pts.push_back({s1, s2});
        const auto out = outgoing_22(Ul, s1, s2, p, opts).strengths;
        sig.push_back(out[0]);
        tau.push_back(out[2]);
        if (g_probes) {
          const auto ou = outgoing_22(probe_u, s1, s2, p, opts).strengths;
          const auto ow = outgoing_22(probe_w, s1, s2, p, opts).strengths;
          sig_u.push_back(ou[0]);
          tau_u.push_back(ou[2]);
          sig_w.push_back(ow[0]);
          tau_w.push_back(ow[2]);
        }
      }
      // Along the axes the incoming pattern is a single 2-shock.
      for (const auto& [s1, s2] : {std::array<double, 2>{-h * i / kTaylorStencil, 0.0},
                                   std::array<double, 2>{0.0, -h * i / kTaylorStencil}}) {
        const auto out = outgoing_22(Ul, s1, s2, p, opts).strengths;
        fit.max_axis_value = std::max({fit.max_axis_value, std::abs(out[0]), std::abs(out[2])});
      }
    }
    fit.c_sigma_per_scale.push_back(fit_cubic_coefficient(pts, sig));
    fit.c_tau_per_scale.push_back(fit_cubic_coefficient(pts, tau));
    if (g_probes) {
      Mat2 g{};
      g[0][0] = fit_cubic_coefficient(pts, sig_u) / Ul.u;
      g[1][0] = fit_cubic_coefficient(pts, tau_u) / Ul.u;
      g[0][1] = fit_cubic_coefficient(pts, sig_w) / Ul.w;
      g[1][1] = fit_cubic_coefficient(pts, tau_w) / Ul.w;
      fit.g_per_scale.push_back(g);
      g00.push_back(g[0][0]);
      g01.push_back(g[0][1]);
      g10.push_back(g[1][0]);
      g11.push_back(g[1][1]);
    }
  }
  fit.c_sigma = extrapolate_to_zero(scales, fit.c_sigma_per_scale, &fit.extrapolation_condition);
  fit.c_tau = extrapolate_to_zero(scales, fit.c_tau_per_scale);
  if (g_probes) {
    fit.g_matrix = {{{extrapolate_to_zero(scales, g00), extrapolate_to_zero(scales, g01)},
                     {extrapolate_to_zero(scales, g10), extrapolate_to_zero(scales, g11)}}};
  }
  return fit;
}

ClosedForm12 closed_form_12_eta0(const State& Ul, double s, double sigma) {
  ClosedForm12 cf;
  cf.gamma = 2.0 * Ul.v + s;
  cf.ratio_sigma = 2.0 / (-s + 2.0);
  cf.ratio_tau = (cf.gamma + 4.0) / ((4.0 - cf.gamma) * (-s + 2.0));
  cf.sigma_p = cf.ratio_sigma * sigma;
  cf.tau_p = cf.ratio_tau * s * sigma;
  cf.ratio_sigma_bracketed = 2.0 / 3.0 < cf.ratio_sigma && cf.ratio_sigma < 1.0;
  cf.ratio_tau_bracketed = 1.0 / 21.0 < cf.ratio_tau && cf.ratio_tau < 4.0;
  return cf;
}

Mat2 matrix_a_12(double vl, double s, double gamma) {
  return {{{gamma + 4.0, gamma - 4.0}, {vl * (gamma + 4.0), (vl + s - 2.0) * (gamma - 4.0)}}};
}

Mat2 matrix_a_12_inverse(double vl, double s, double gamma) {
  const double f = 1.0 / ((16.0 - gamma * gamma) * (-s + 2.0));
  return {{{f * (vl + s - 2.0) * (gamma - 4.0), -f * (gamma - 4.0)},
           {-f * vl * (gamma + 4.0), f * (gamma + 4.0)}}};
}

Vec2 rhs_y_12(double vl, double s, double gamma, double sigma) {
  return {(gamma + 4.0) * sigma, (vl + s) * (gamma + 4.0) * sigma};
}

Vec2 remainder_12(const Vec2& X, const State& Ul, double s, double sigma, const ModelParams& p) {
  const State Um = wave_fan_curve(Family::Two, Ul, s, p).state;
  const State Ur = wave_fan_curve(Family::One, Um, sigma, p).state;
  const State Um1 = wave_fan_curve(Family::One, Ul, X[0], p).state;
  // D3 is a straight line, so D3[-tau', Ur] is evaluated on the line through Ur.
  const State Um2 = Ur - X[1] * Vec3{1.0, 0.0, Ur.v - 2.0};
  const auto p2 = perturbation(Um2), pm = perturbation(Um), p1 = perturbation(Um1),
             pl = perturbation(Ul);
  return {p2[0] - pm[0] - p1[0] + pl[0], p2[1] - pm[1] - p1[1] + pl[1]};
}

ContractionResult contraction_solve_12(const Interaction12Scenario& sc,
                                       const ContractionOptions& opts) {
  sc.validate();
  const ModelParams p{sc.eta};
  const double vl = sc.Ul.v;
  const double gamma = 2.0 * vl + sc.s;
  const Mat2 Ainv = matrix_a_12_inverse(vl, sc.s, gamma);
  const Vec2 x0 = mul(Ainv, rhs_y_12(vl, sc.s, gamma, sc.sigma));

  ContractionResult res;
  res.x0 = x0;
  res.trace.push_back(x0);
  Vec2 x = x0;
  double prev_step = -1.0;
  double max_offset = 0.0;
  const double noise = 1e3 * DBL_EPSILON * sc.eta * (1.0 + std::abs(Ainv[0][0]) +
                       std::abs(Ainv[0][1]) + std::abs(Ainv[1][0]) + std::abs(Ainv[1][1]));
  for (int it = 1; it <= opts.max_iter; ++it) {
    const Vec2 F = remainder_12(x, sc.Ul, sc.s, sc.sigma, p);
    const Vec2 corr = mul(Ainv, F);
    const Vec2 next{x0[0] - sc.eta * corr[0], x0[1] - sc.eta * corr[1]};
    const double step = norm2(sub(next, x));
    res.trace.push_back(next);
    max_offset = std::max(max_offset, norm2(sub(next, x0)));
    if (prev_step > noise) {
      const double ratio = step / prev_step;
      res.contraction_ratio = std::max(res.contraction_ratio, ratio);
      if (ratio >= 1.0) {
        std::ostringstream os;
        os << "fixed-point map is not contracting: step ratio " << ratio << " at iteration " << it;
        throw ContractionError(os.str(), ratio, res.trace);
      }
    }
    x = next;
    res.iterations = it;
    if (step <= opts.step_tol) break;
    prev_step = step;
    if (it == opts.max_iter) {
      throw ContractionError("fixed-point iteration hit max_iter", res.contraction_ratio, res.trace);
    }
  }
  res.x = x;
  const double scale = std::abs(sc.sigma * sc.s);
  res.empirical_k = (sc.eta > 0.0 && scale > 0.0) ? max_offset / (sc.eta * scale) : 0.0;
  const double k = opts.ball_k ? *opts.ball_k : (sc.eta > 0.0 ? 1.0 / sc.eta : 0.0);
  res.in_ball = max_offset <= k * sc.eta * scale;
  return res;
}

InteractionReport interact_12(const Interaction12Scenario& sc, const RiemannOptions& opts) {
  sc.validate();
  const ModelParams p{sc.eta};
  const State Um = wave_fan_curve(Family::Two, sc.Ul, sc.s, p, opts.curve).state;
  const State Ur = wave_fan_curve(Family::One, Um, sc.sigma, p, opts.curve).state;
  RiemannOptions ro = opts;
  ro.require_unit_ball = false;
  const RiemannFan fan = solve_riemann(sc.Ul, Ur, p, ro);

  InteractionReport rep;
  rep.kind = "12";
  rep.incoming = {sc.s, sc.sigma};
  rep.outgoing = fan.strengths;
  rep.residual = fan.residual;
  rep.pattern = classify_pattern(fan.strengths);
  const double sp = fan.strengths[0], mid = fan.strengths[1], tp = fan.strengths[2];
  const double ss = sc.sigma * sc.s;
  rep.bound_checks.push_back(le("2sigma<=sigma'", 2.0 * sc.sigma, sp));
  rep.bound_checks.push_back(le("sigma'<=sigma/2", sp, 0.5 * sc.sigma));
  rep.bound_checks.push_back(le("sigma*s/100<=tau'", ss / 100.0, tp));
  rep.bound_checks.push_back(le("tau'<=10*sigma*s", tp, 10.0 * ss));
  rep.bound_checks.push_back({"s_mid=s", mid, sc.s, additive(mid, sc.s, sc.Ul.v)});
  return rep;
}

std::vector<Bounds12Row> verify_bounds_12(int n_samples, double eta, std::uint64_t seed) {
  ModelParams{eta}.validate();
  constexpr double kInset = 1e-9;
  std::vector<Bounds12Row> rows;
  rows.reserve(std::max(0, n_samples));
  for (int k = 0; k < n_samples; ++k) {
    Bounds12Row row;
    row.id = k;
    Interaction12Scenario& sc = row.scenario;
    sc.Ul = (0.5 * (1.0 - kInset)) * unit_ball_draw(seed, k, 2);
    sc.s = -0.25 * (kInset + (1.0 - 2.0 * kInset) * unit_draw(seed, k, 0));
    sc.sigma = -0.25 * (kInset + (1.0 - 2.0 * kInset) * unit_draw(seed, k, 1));
    sc.eta = eta;
    sc.eps = std::max(sc.eps, eta);
    try {
      row.report = interact_12(sc);
      const bool sss = row.report.pattern == "SSS";
      row.report.bound_checks.push_back({"pattern=SSS", sss ? 1.0 : 0.0, 1.0, sss});
      const ContractionResult cr = contraction_solve_12(sc);
      const double gap = std::max(std::abs(cr.x[0] - row.report.outgoing[0]),
                                  std::abs(cr.x[1] - row.report.outgoing[2]));
      row.report.bound_checks.push_back(le("|X_fixed-X_riemann|<=1e-9", gap, kOracleAgreementTol));
      row.report.bound_checks.push_back(
          le("contraction_ratio<=1/2", cr.contraction_ratio, kContractionRatioMax));
      row.contraction = cr;
    } catch (const std::exception& e) {
      row.error = e.what();
      row.report.bound_checks.push_back({"solved", 0.0, 1.0, false});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Interaction22Scenario sample_22(std::uint64_t seed, int index, double a, double eps,
                                double eta_max) {
  Interaction22Scenario sc;
  sc.a = a;
  sc.eps = eps;
  const double box = eps * a;
  sc.Ul = Interaction22Scenario::sharp(a) + box * unit_ball_draw(seed, index, 3);
  sc.s1 = -box * (1.0 - unit_draw(seed, index, 0));
  sc.s2 = -box * (1.0 - unit_draw(seed, index, 1));
  sc.eta = eta_max * unit_draw(seed, index, 2);
  return sc;
}

}  // namespace bjw

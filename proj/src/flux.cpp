#include "bjw/flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bjw/errors.hpp"

namespace bjw {

namespace {

void require_finite(const State& U) {
  if (!U.finite()) {
    std::ostringstream os;
    os << "non-finite state " << U;
    throw DomainError(os.str());
  }
}

// Characteristic polynomial det(M - x I) = -x^3 + c2 x^2 - c1 x + c0.
struct Cubic {
  double c2, c1, c0;
  double operator()(double x) const { return ((-x + c2) * x - c1) * x + c0; }
  double derivative(double x) const { return (-3.0 * x + 2.0 * c2) * x - c1; }
};

Cubic characteristic_polynomial(const Mat3& m) {
  const double tr = m[0][0] + m[1][1] + m[2][2];
  const double minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] -
                        m[0][2] * m[2][0] + m[1][1] * m[2][2] - m[1][2] * m[2][1];
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return {tr, minors, det};
}

double polish_root(const Cubic& q, double x) {
  for (int it = 0; it < 3; ++it) {
    const double fx = q(x);
    const double dfx = q.derivative(x);
    if (fx == 0.0 || dfx == 0.0) break;
    const double next = x - fx / dfx;
    if (!(std::abs(q(next)) < std::abs(fx))) break;
    x = next;
  }
  return x;
}

double eigen_residual(const Mat3& J, const Vec3& r, double lambda) {
  return (mul(J, r) - lambda * r).norm();
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.v * b.w - a.w * b.v, a.w * b.u - a.u * b.w, a.u * b.v - a.v * b.u};
}

// Null vector of J - lambda I from the best-conditioned pair of rows.
Vec3 null_vector(const Mat3& J, double lambda) {
  std::array<Vec3, 3> rows;
  for (int i = 0; i < 3; ++i) rows[i] = {J[i][0], J[i][1], J[i][2]};
  for (int i = 0; i < 3; ++i) rows[i][i] -= lambda;
  Vec3 best{};
  double best_norm = -1.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const Vec3 c = cross(rows[i], rows[j]);
      if (c.norm() > best_norm) {
        best_norm = c.norm();
        best = c;
      }
    }
  }
  if (std::abs(best.u) > 1e-8 * best_norm) return (1.0 / best.u) * best;
  return (1.0 / best_norm) * best;
}

// Radical inverse of n in the given base.
double radical_inverse(std::uint64_t n, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (n > 0) {
    r += f * static_cast<double>(n % base);
    n /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

std::array<double, 2> perturbation(const State& U) {
  const double u = U.u, v = U.v, w = U.w;
  return {2.0 * u * w - 2.0 * u * u * (v - 1.0), w * w - u * u * (v - 2.0) * v};
}

Vec3 flux(const State& U, const ModelParams& p) {
  require_finite(U);
  const double u = U.u, v = U.v, w = U.w;
  const auto pq = perturbation(U);
  return {4.0 * ((v - 1.0) * u - w) + p.eta * pq[0], v * v,
          4.0 * (v * (v - 2.0) * u - (v - 1.0) * w) + p.eta * pq[1]};
}

Mat3 jacobian(const State& U, const ModelParams& p) {
  require_finite(U);
  const double u = U.u, v = U.v, w = U.w, e = p.eta;
  Mat3 J{};
  J[0] = {4.0 * (v - 1.0) + e * (2.0 * w - 4.0 * u * (v - 1.0)), 4.0 * u - 2.0 * e * u * u,
          -4.0 + 2.0 * e * u};
  J[1] = {0.0, 2.0 * v, 0.0};
  J[2] = {4.0 * v * (v - 2.0) - 2.0 * e * u * v * (v - 2.0),
          4.0 * ((2.0 * v - 2.0) * u - w) - e * u * u * (2.0 * v - 2.0),
          -4.0 * (v - 1.0) + 2.0 * e * w};
  return J;
}

Mat2 jhat(double v) {
  return {{{4.0 * (v - 1.0), -4.0}, {4.0 * v * (v - 2.0), 4.0 * (1.0 - v)}}};
}

EigenSystem eigensystem(const State& U, const ModelParams& p) {
  const Mat3 J = jacobian(U, p);
  EigenSystem es;
  es.in_unit_ball = U.norm() < 1.0;

  // Roots of the (u, w) block.
  const double a = J[0][0], b = J[0][2], c = J[2][0], d = J[2][2];
  const double half_tr = 0.5 * (a + d);
  const double disc = 0.25 * (a - d) * (a - d) + b * c;
  if (!(disc > 0.0)) {
    throw HyperbolicityError("complex or repeated characteristic speeds", U);
  }
  const double root = std::sqrt(disc);
  // Avoid cancellation: compute the larger-magnitude root first.
  double lo, hi;
  if (half_tr >= 0.0) {
    hi = half_tr + root;
    lo = (a * d - b * c) / hi;
  } else {
    lo = half_tr - root;
    hi = (a * d - b * c) / lo;
  }
  if (lo > hi) std::swap(lo, hi);

  const Cubic q = characteristic_polynomial(J);
  es.lambda = {polish_root(q, lo), 2.0 * U.v, polish_root(q, hi)};
  const double scale = 1.0 + std::abs(es.lambda[0]) + std::abs(es.lambda[2]);
  const double gap_tol = 1e-12 * scale;
  if (!(es.lambda[1] - es.lambda[0] > gap_tol) || !(es.lambda[2] - es.lambda[1] > gap_tol)) {
    throw HyperbolicityError("characteristic speeds not strictly ordered", U);
  }

  const Vec3 r1{1.0, 0.0, U.v};
  const Vec3 r3{1.0, 0.0, U.v - 2.0};
  es.rvec[0] = eigen_residual(J, r1, es.lambda[0]) <= kTolEig ? r1 : null_vector(J, es.lambda[0]);
  es.rvec[2] = eigen_residual(J, r3, es.lambda[2]) <= kTolEig ? r3 : null_vector(J, es.lambda[2]);

  // r2 with v-component 1: (B - lambda2 I) (ru, rw) = -(dF1/dv, dF3/dv).
  const double l2 = es.lambda[1];
  const Mat2 B{{{a - l2, b}, {c, d - l2}}};
  const double det = determinant(B);
  if (det == 0.0) throw HyperbolicityError("singular second-family eigenproblem", U);
  const Vec2 rhs{-J[0][1], -J[2][1]};
  const Vec2 rhat = mul(inverse(B), rhs);
  es.rvec[1] = {rhat[0], 1.0, rhat[1]};
  return es;
}

double characteristic_speed(int family, const State& U, const ModelParams& p) {
  if (family < 1 || family > 3) throw DomainError("family must be 1, 2 or 3");
  if (family == 2) {
    require_finite(U);
    return 2.0 * U.v;
  }
  return eigensystem(U, p).lambda[family - 1];
}

State halton_ball_point(std::uint64_t index, double radius) {
  const double h1 = radical_inverse(index, 2);
  const double h2 = radical_inverse(index, 3);
  const double h3 = radical_inverse(index, 5);
  const double r = radius * std::cbrt(h1);
  const double cos_t = 1.0 - 2.0 * h2;
  const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
  const double phi = 2.0 * std::numbers::pi * h3;
  return {r * sin_t * std::cos(phi), r * cos_t, r * sin_t * std::sin(phi)};
}

HyperbolicityReport check_strict_hyperbolicity(const ModelParams& p, double radius,
                                               int n_samples, std::uint64_t seed) {
  p.validate();
  if (!(radius >= 0.0 && radius < 1.0)) throw DomainError("radius must lie in [0, 1)");
  HyperbolicityReport rep;
  rep.eta = p.eta;
  rep.radius = radius;
  rep.n_samples = n_samples;
  const double inf = std::numeric_limits<double>::infinity();
  rep.min_gap12 = rep.min_gap23 = inf;
  rep.lambda_min = {inf, inf, inf};
  rep.lambda_max = {-inf, -inf, -inf};
  for (int k = 0; k < n_samples; ++k) {
    const State U = halton_ball_point(seed + k + 1, radius);
    try {
      const EigenSystem es = eigensystem(U, p);
      rep.min_gap12 = std::min(rep.min_gap12, es.lambda[1] - es.lambda[0]);
      rep.min_gap23 = std::min(rep.min_gap23, es.lambda[2] - es.lambda[1]);
      for (int i = 0; i < 3; ++i) {
        rep.lambda_min[i] = std::min(rep.lambda_min[i], es.lambda[i]);
        rep.lambda_max[i] = std::max(rep.lambda_max[i], es.lambda[i]);
      }
    } catch (const HyperbolicityError&) {
      ++rep.failures;
    }
  }
  rep.pass = n_samples > 0 && rep.failures == 0 && rep.min_gap12 > 0.0 && rep.min_gap23 > 0.0;
  return rep;
}

NonlinearityReport check_genuine_nonlinearity(const ModelParams& p, double radius,
                                              int n_samples, std::uint64_t seed) {
  p.validate();
  if (!(radius >= 0.0 && radius < 1.0)) throw DomainError("radius must lie in [0, 1)");
  NonlinearityReport rep;
  rep.eta = p.eta;
  rep.radius = radius;
  rep.n_samples = n_samples;
  const double inf = std::numeric_limits<double>::infinity();
  rep.min_value = {inf, inf, inf};
  rep.max_value = {-inf, -inf, -inf};
  const double h = kGradientStep;
  for (int k = 0; k < n_samples; ++k) {
    const State U = halton_ball_point(seed + k + 1, radius);
    const EigenSystem es = eigensystem(U, p);
    for (int fam = 1; fam <= 3; ++fam) {
      Vec3 grad{};
      for (int j = 0; j < 3; ++j) {
        State up = U, dn = U;
        up[j] += h;
        dn[j] -= h;
        grad[j] = (characteristic_speed(fam, up, p) - characteristic_speed(fam, dn, p)) / (2.0 * h);
      }
      const double value = dot(grad, es.rvec[fam - 1]);
      rep.min_value[fam - 1] = std::min(rep.min_value[fam - 1], value);
      rep.max_value[fam - 1] = std::max(rep.max_value[fam - 1], value);
    }
  }
  rep.family_pass[0] = rep.min_value[0] > kNonlinearityMargin;
  rep.family_pass[1] = rep.min_value[1] > kNonlinearityMargin;
  rep.family_pass[2] = rep.max_value[2] < -kNonlinearityMargin;
  rep.pass = n_samples > 0 && rep.family_pass[0] && rep.family_pass[1] && rep.family_pass[2];
  return rep;
}

}  // namespace bjw

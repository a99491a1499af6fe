#ifndef BJW_STATE_HPP_
#define BJW_STATE_HPP_

#include <array>
#include <cmath>
#include <iosfwd>

namespace bjw {

/// A point U = (u, v, w) of the state space. Also used for flux vectors and
/// eigenvectors, which live in the same R^3.
struct State {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? u : (i == 1 ? v : w); }
  constexpr double& operator[](int i) { return i == 0 ? u : (i == 1 ? v : w); }

  State& operator+=(const State& o) { u += o.u; v += o.v; w += o.w; return *this; }
  State& operator-=(const State& o) { u -= o.u; v -= o.v; w -= o.w; return *this; }
  State& operator*=(double a) { u *= a; v *= a; w *= a; return *this; }

  bool finite() const { return std::isfinite(u) && std::isfinite(v) && std::isfinite(w); }
  double norm() const { return std::sqrt(u * u + v * v + w * w); }

  friend bool operator==(const State&, const State&) = default;
};

inline State operator+(State a, const State& b) { return a += b; }
inline State operator-(State a, const State& b) { return a -= b; }
inline State operator*(double s, State a) { return a *= s; }
inline State operator*(State a, double s) { return a *= s; }
inline double dot(const State& a, const State& b) { return a.u * b.u + a.v * b.v + a.w * b.w; }
inline double distance(const State& a, const State& b) { return (a - b).norm(); }

std::ostream& operator<<(std::ostream& os, const State& s);

using Vec3 = State;
using Mat3 = std::array<std::array<double, 3>, 3>;
using Mat2 = std::array<std::array<double, 2>, 2>;
using Vec2 = std::array<double, 2>;

inline Vec3 mul(const Mat3& m, const Vec3& x) {
  return {m[0][0] * x.u + m[0][1] * x.v + m[0][2] * x.w,
          m[1][0] * x.u + m[1][1] * x.v + m[1][2] * x.w,
          m[2][0] * x.u + m[2][1] * x.v + m[2][2] * x.w};
}

inline Vec2 mul(const Mat2& m, const Vec2& x) {
  return {m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]};
}

inline Mat2 multiply(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

inline double determinant(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

/// Inverse by the adjugate formula. Caller guarantees det != 0.
inline Mat2 inverse(const Mat2& m) {
  const double d = determinant(m);
  return {{{m[1][1] / d, -m[0][1] / d}, {-m[1][0] / d, m[0][0] / d}}};
}

/// Solves m x = b for a 3x3 system by Gaussian elimination with partial
/// pivoting. Returns false when a pivot vanishes.
bool solve3(Mat3 m, Vec3 b, Vec3& x);

/// Ratio of largest to smallest singular value.
double condition_number(const Mat2& m);

/// Model parameter eta selecting the flux F_eta. Admissible range [0, 1/4).
struct ModelParams {
  double eta = 0.0;

  static constexpr double kEtaMax = 0.25;

  /// Throws DomainError when eta is outside [0, 1/4) or not finite.
  void validate() const;
};

}  // namespace bjw

#endif  // BJW_STATE_HPP_

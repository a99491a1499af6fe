#include "bjw/state.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "bjw/errors.hpp"

namespace bjw {

std::ostream& operator<<(std::ostream& os, const State& s) {
  return os << '(' << s.u << ", " << s.v << ", " << s.w << ')';
}

bool solve3(Mat3 m, Vec3 b, Vec3& x) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0) return false;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 3; ++c) m[r][c] -= f * m[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * x[c];
    x[r] = acc / m[r][r];
  }
  return true;
}

double condition_number(const Mat2& m) {
  // Singular values from the eigenvalues of m^T m.
  const double a = m[0][0] * m[0][0] + m[1][0] * m[1][0];
  const double b = m[0][0] * m[0][1] + m[1][0] * m[1][1];
  const double d = m[0][1] * m[0][1] + m[1][1] * m[1][1];
  const double half_tr = 0.5 * (a + d);
  const double disc = std::sqrt(std::max(0.0, 0.25 * (a - d) * (a - d) + b * b));
  const double smax = std::sqrt(half_tr + disc);
  const double smin = std::sqrt(std::max(0.0, half_tr - disc));
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

void ModelParams::validate() const {
  if (!std::isfinite(eta) || eta < 0.0 || eta >= kEtaMax) {
    std::ostringstream os;
    os << "eta = " << eta << " outside the admissible range [0, 0.25)";
    throw DomainError(os.str());
  }
}

}  // namespace bjw

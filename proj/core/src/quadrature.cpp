#include "optcert/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace optcert {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Value and derivative of the Legendre polynomial P_m at x, via the standard
// three-term recurrence.
void legendre(int m, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= m; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = m == 0 ? p0 : p1;
  dp = m == 0 ? 0.0 : m * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

std::vector<GaussPoint> gauss_legendre_01(int m) {
  if (m < 1) throw std::invalid_argument("gauss_legendre_01: need at least one point");
  std::vector<GaussPoint> out(m);
  for (int k = 0; k < m; ++k) {
    // Chebyshev-like initial guess, then Newton to machine precision.
    double x = std::cos(kPi * (k + 0.75) / (m + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(m, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre(m, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out[k].x = 0.5 * (x + 1.0);
    out[k].w = 0.5 * w;  // [-1,1] weights sum to 2, halve so they sum to 1
  }
  return out;
}

QuadratureRule::QuadratureRule(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("QuadratureRule: degree must be nonnegative");
  // Collapsed-square construction: x = u, y = v (1 - u) maps the unit square
  // onto the reference triangle with Jacobian (1 - u). The extra factor raises
  // the u-degree by one, so m points are exact for total degree 2m - 2.
  const int m = (degree + 3) / 2;
  const std::vector<GaussPoint> line = gauss_legendre_01(m);
  points_.reserve(static_cast<std::size_t>(m) * m);
  for (const GaussPoint& gu : line) {
    for (const GaussPoint& gv : line) {
      const double x = gu.x;
      const double y = gv.x * (1.0 - gu.x);
      QuadPoint qp;
      qp.l1 = 1.0 - x - y;
      qp.l2 = x;
      qp.l3 = y;
      // Reference-triangle area is 1/2; the factor 2 renormalizes the weight
      // sum to one so callers scale by the physical |T| directly.
      qp.w = 2.0 * gu.w * gv.w * (1.0 - gu.x);
      points_.push_back(qp);
    }
  }
}

const QuadratureRule& QuadratureRule::of_degree(int degree) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(degree);
  if (it == cache.end()) {
    it = cache.emplace(degree, QuadratureRule(degree)).first;
  }
  return it->second;
}

}  // namespace optcert

#pragma once

#include <vector>

// Triangle quadrature used by all assembly and norm evaluation. Rules live in
// barycentric coordinates with weights summing to one, so a physical integral
// over a triangle T is |T| * sum_i w_i f(p_i).
namespace optcert {

struct QuadPoint {
  double l1;  // barycentric weight of the first vertex
  double l2;
  double l3;
  double w;
};

class QuadratureRule {
 public:
  // Rule integrating bivariate polynomials of total degree <= degree exactly.
  // Instances are built once per degree and cached; the returned reference
  // stays valid for the lifetime of the program.
  static const QuadratureRule& of_degree(int degree);

  int degree() const { return degree_; }
  const std::vector<QuadPoint>& points() const { return points_; }

 private:
  explicit QuadratureRule(int degree);

  int degree_;
  std::vector<QuadPoint> points_;
};

struct GaussPoint {
  double x;
  double w;
};

// Gauss-Legendre abscissas and weights transplanted to [0, 1], weights
// summing to one. Exact for univariate polynomials of degree <= 2m - 1.
std::vector<GaussPoint> gauss_legendre_01(int m);

}  // namespace optcert

#pragma once

#include <array>
#include <cmath>

#include "optcert/quadrature.hpp"

// Splitting a triangle along level lines of a linear function. Everything is
// done in barycentric coordinates of the parent triangle: affine functions
// interpolate exactly along clipped edges, and the original hat functions are
// recovered at any interior point as the barycentric coordinates themselves.
// Used to integrate clamped controls and signed odd powers exactly.
namespace optcert::detail {

struct BaryPoint {
  double l1, l2, l3;
};

// Convex polygon; one or two half-plane clips of a triangle yield at most
// five vertices, the array leaves headroom.
struct BaryPoly {
  std::array<BaryPoint, 8> v;
  int n = 0;
};

inline BaryPoly whole_triangle() {
  BaryPoly p;
  p.v[0] = {1.0, 0.0, 0.0};
  p.v[1] = {0.0, 1.0, 0.0};
  p.v[2] = {0.0, 0.0, 1.0};
  p.n = 3;
  return p;
}

inline double bary_value(const std::array<double, 3>& w, const BaryPoint& p) {
  return w[0] * p.l1 + w[1] * p.l2 + w[2] * p.l3;
}

// Sutherland-Hodgman step keeping the region where the linear function with
// vertex coefficients `coef` is <= 0. Vertices on the line are kept.
inline BaryPoly clip_nonpositive(const BaryPoly& poly, const std::array<double, 3>& coef) {
  BaryPoly out;
  if (poly.n == 0) return out;
  for (int i = 0; i < poly.n; ++i) {
    const BaryPoint& a = poly.v[i];
    const BaryPoint& b = poly.v[(i + 1) % poly.n];
    const double sa = bary_value(coef, a);
    const double sb = bary_value(coef, b);
    if (sa <= 0.0) out.v[out.n++] = a;
    if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0)) {
      const double t = sa / (sa - sb);
      out.v[out.n++] = {a.l1 + t * (b.l1 - a.l1), a.l2 + t * (b.l2 - a.l2),
                        a.l3 + t * (b.l3 - a.l3)};
    }
  }
  return out;
}

// Signed polygon area in the (l2, l3) plane. The affine map to physical
// coordinates scales areas by 2 |T|, so the physical area is 2 |T| times this.
inline double area_factor(const BaryPoly& poly) {
  double s = 0.0;
  for (int i = 0; i < poly.n; ++i) {
    const BaryPoint& a = poly.v[i];
    const BaryPoint& b = poly.v[(i + 1) % poly.n];
    s += a.l2 * b.l3 - b.l2 * a.l3;
  }
  return 0.5 * s;
}

// Quadrature over a convex polygon piece: fan triangulation from the first
// vertex, the rule mapped onto each fan triangle. visit(lambda, weight) gets
// barycentric coordinates with respect to the PARENT triangle and a weight
// that already carries the physical sub-area. Slivers below 1e-14 of the
// parent area are dropped.
template <class F>
void quadrature_over(const BaryPoly& poly, double tri_area, const QuadratureRule& rule,
                     F&& visit) {
  if (poly.n < 3) return;
  const double min_area = 1e-14 * tri_area;
  for (int i = 1; i + 1 < poly.n; ++i) {
    const BaryPoint& a = poly.v[0];
    const BaryPoint& b = poly.v[i];
    const BaryPoint& c = poly.v[i + 1];
    const double factor =
        0.5 * ((b.l2 - a.l2) * (c.l3 - a.l3) - (c.l2 - a.l2) * (b.l3 - a.l3));
    const double area = 2.0 * tri_area * factor;
    if (std::abs(area) < min_area) continue;
    for (const QuadPoint& qp : rule.points()) {
      const BaryPoint lam{qp.l1 * a.l1 + qp.l2 * b.l1 + qp.l3 * c.l1,
                          qp.l1 * a.l2 + qp.l2 * b.l2 + qp.l3 * c.l2,
                          qp.l1 * a.l3 + qp.l2 * b.l3 + qp.l3 * c.l3};
      visit(lam, qp.w * area);
    }
  }
}

// Pieces of the triangle where a linear function with vertex values w lies
// below lo, between the bounds, and above hi. Infinite bounds disable the
// corresponding cut. Degenerate pieces come out with zero area and are
// filtered by quadrature_over.
struct ClampPieces {
  BaryPoly low, free, high;
};

inline ClampPieces split_clamp(const std::array<double, 3>& w, double lo, double hi) {
  ClampPieces out;
  BaryPoly free_piece = whole_triangle();
  if (std::isfinite(hi)) {
    out.high = clip_nonpositive(whole_triangle(), {hi - w[0], hi - w[1], hi - w[2]});
    free_piece = clip_nonpositive(free_piece, {w[0] - hi, w[1] - hi, w[2] - hi});
  }
  if (std::isfinite(lo)) {
    out.low = clip_nonpositive(whole_triangle(), {w[0] - lo, w[1] - lo, w[2] - lo});
    free_piece = clip_nonpositive(free_piece, {lo - w[0], lo - w[1], lo - w[2]});
  }
  out.free = free_piece;
  return out;
}

}  // namespace optcert::detail

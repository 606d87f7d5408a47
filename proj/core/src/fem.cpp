#include "optcert/fem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "clip.hpp"

namespace optcert {

namespace {

struct ElementGeometry {
  std::array<int, 3> idx;
  std::array<Node, 3> pt;
  double area;
  std::array<std::array<double, 2>, 3> grad;  // gradients of the three hats
};

ElementGeometry geometry(const Mesh& mesh, int t) {
  ElementGeometry g;
  g.idx = mesh.triangles[t].v;
  for (int k = 0; k < 3; ++k) g.pt[k] = mesh.nodes[g.idx[k]];
  const double x0 = g.pt[0].x, y0 = g.pt[0].y;
  const double x1 = g.pt[1].x, y1 = g.pt[1].y;
  const double x2 = g.pt[2].x, y2 = g.pt[2].y;
  const double twice = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
  g.area = 0.5 * twice;
  g.grad[0] = {(y1 - y2) / twice, (x2 - x1) / twice};
  g.grad[1] = {(y2 - y0) / twice, (x0 - x2) / twice};
  g.grad[2] = {(y0 - y1) / twice, (x1 - x0) / twice};
  return g;
}

Node physical_point(const ElementGeometry& g, double l1, double l2, double l3) {
  return {l1 * g.pt[0].x + l2 * g.pt[1].x + l3 * g.pt[2].x,
          l1 * g.pt[0].y + l2 * g.pt[1].y + l3 * g.pt[2].y};
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

std::array<double, 3> vertex_values(const P1Function& f, const ElementGeometry& g) {
  return {f.values[g.idx[0]], f.values[g.idx[1]], f.values[g.idx[2]]};
}

void require_mesh(const P1Function& f, const char* where) {
  if (!f.mesh) throw std::logic_error(std::string(where) + ": function has no mesh");
  if (f.values.size() != f.mesh->node_count()) {
    throw std::logic_error(std::string(where) + ": value count does not match the mesh");
  }
}

// N(y)_i = integral of phi(y_h) psi_i, accumulated over all nodes.
void add_semilinear_term(const Mesh& mesh, const Nonlinearity& phi, const P1Function& y,
                         int degree, std::vector<double>& out) {
  const QuadratureRule& rule = QuadratureRule::of_degree(degree);
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    const std::array<double, 3> yv = vertex_values(y, g);
    for (const QuadPoint& qp : rule.points()) {
      const double val = phi.phi(yv[0] * qp.l1 + yv[1] * qp.l2 + yv[2] * qp.l3);
      const double w = g.area * qp.w * val;
      out[g.idx[0]] += w * qp.l1;
      out[g.idx[1]] += w * qp.l2;
      out[g.idx[2]] += w * qp.l3;
    }
  }
}

void add_stiffness_triplets(const Mesh& mesh, std::vector<Triplet>& trips) {
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double v =
            g.area * (g.grad[i][0] * g.grad[j][0] + g.grad[i][1] * g.grad[j][1]);
        trips.push_back({g.idx[i], g.idx[j], v});
      }
    }
  }
}

}  // namespace

double P1Function::eval(double x, double y) const {
  require_mesh(*this, "P1Function::eval");
  const int n = mesh->n;
  const double gx = std::clamp(x, 0.0, 1.0) * n;
  const double gy = std::clamp(y, 0.0, 1.0) * n;
  const int ix = std::min(static_cast<int>(gx), n - 1);
  const int iy = std::min(static_cast<int>(gy), n - 1);
  const double xi = gx - ix;
  const double eta = gy - iy;
  const int ll = mesh->node_index(ix, iy);
  const int lr = ll + 1;
  const int ul = ll + n + 1;
  const int ur = ul + 1;
  // The diagonal runs lower-left to upper-right; xi >= eta is the lower half.
  if (xi >= eta) {
    return values[ll] + (values[lr] - values[ll]) * xi + (values[ur] - values[lr]) * eta;
  }
  return values[ll] + (values[ur] - values[ul]) * xi + (values[ul] - values[ll]) * eta;
}

double P1Function::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

P1Function interpolate(const Mesh& mesh, const ScalarField& f) {
  P1Function out(mesh);
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    out.values[i] = f(mesh.nodes[i].x, mesh.nodes[i].y);
  }
  return out;
}

double ClampedLoad::eval(double x, double y) const {
  return std::clamp(base.eval(x, y), lo, hi);
}

SparseMatrix assemble_stiffness(const Mesh& mesh) {
  std::vector<Triplet> trips;
  trips.reserve(mesh.triangle_count() * 9);
  add_stiffness_triplets(mesh, trips);
  return SparseMatrix::from_triplets(static_cast<int>(mesh.node_count()), trips);
}

SparseMatrix assemble_mass(const Mesh& mesh) {
  std::vector<Triplet> trips;
  trips.reserve(mesh.triangle_count() * 9);
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    const double s = g.area / 12.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        trips.push_back({g.idx[i], g.idx[j], i == j ? 2.0 * s : s});
      }
    }
  }
  return SparseMatrix::from_triplets(static_cast<int>(mesh.node_count()), trips);
}

SparseMatrix assemble_weighted_mass(const Mesh& mesh, const TriangleField& weight,
                                    int degree) {
  const QuadratureRule& rule = QuadratureRule::of_degree(degree);
  std::vector<Triplet> trips;
  trips.reserve(mesh.triangle_count() * 9);
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    std::array<std::array<double, 3>, 3> acc{};
    for (const QuadPoint& qp : rule.points()) {
      const double w = g.area * qp.w * weight(t, qp.l1, qp.l2, qp.l3);
      const std::array<double, 3> lam = {qp.l1, qp.l2, qp.l3};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) acc[i][j] += w * lam[i] * lam[j];
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) trips.push_back({g.idx[i], g.idx[j], acc[i][j]});
    }
  }
  return SparseMatrix::from_triplets(static_cast<int>(mesh.node_count()), trips);
}

namespace {

void add_p1_load(const Mesh& mesh, const P1Function& f, std::vector<double>& b) {
  require_mesh(f, "assemble_load");
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    const std::array<double, 3> fv = vertex_values(f, g);
    const double s = g.area / 12.0;
    for (int i = 0; i < 3; ++i) {
      b[g.idx[i]] += s * (2.0 * fv[i] + fv[(i + 1) % 3] + fv[(i + 2) % 3]);
    }
  }
}

void add_analytic_load(const Mesh& mesh, const ScalarField& f, int degree,
                       std::vector<double>& b) {
  const QuadratureRule& rule = QuadratureRule::of_degree(degree);
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    for (const QuadPoint& qp : rule.points()) {
      const Node x = physical_point(g, qp.l1, qp.l2, qp.l3);
      const double w = g.area * qp.w * f(x.x, x.y);
      b[g.idx[0]] += w * qp.l1;
      b[g.idx[1]] += w * qp.l2;
      b[g.idx[2]] += w * qp.l3;
    }
  }
}

// Classification of a triangle against the clamp window from its vertex
// values; `split` means level lines cross the interior.
enum class ClampCase { all_low, all_free, all_high, split };

ClampCase classify_clamp(const std::array<double, 3>& w, double lo, double hi) {
  const double wmin = std::min({w[0], w[1], w[2]});
  const double wmax = std::max({w[0], w[1], w[2]});
  if (wmax <= lo) return ClampCase::all_low;
  if (wmin >= hi) return ClampCase::all_high;
  if (wmin >= lo && wmax <= hi) return ClampCase::all_free;
  return ClampCase::split;
}

void add_clamped_load(const Mesh& mesh, const ClampedLoad& load, int degree,
                      std::vector<double>& b) {
  require_mesh(load.base, "assemble_load");
  const QuadratureRule& rule = QuadratureRule::of_degree(degree);
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    const std::array<double, 3> w = vertex_values(load.base, g);
    if (!load.exact_split) {
      for (const QuadPoint& qp : rule.points()) {
        const double u =
            std::clamp(w[0] * qp.l1 + w[1] * qp.l2 + w[2] * qp.l3, load.lo, load.hi);
        const double s = g.area * qp.w * u;
        b[g.idx[0]] += s * qp.l1;
        b[g.idx[1]] += s * qp.l2;
        b[g.idx[2]] += s * qp.l3;
      }
      continue;
    }
    switch (classify_clamp(w, load.lo, load.hi)) {
      case ClampCase::all_low:
      case ClampCase::all_high: {
        const double c = classify_clamp(w, load.lo, load.hi) == ClampCase::all_low
                             ? load.lo
                             : load.hi;
        const double s = c * g.area / 3.0;
        for (int i = 0; i < 3; ++i) b[g.idx[i]] += s;
        break;
      }
      case ClampCase::all_free: {
        const double s = g.area / 12.0;
        for (int i = 0; i < 3; ++i) {
          b[g.idx[i]] += s * (2.0 * w[i] + w[(i + 1) % 3] + w[(i + 2) % 3]);
        }
        break;
      }
      case ClampCase::split: {
        const detail::ClampPieces pieces = detail::split_clamp(w, load.lo, load.hi);
        auto add_const = [&](const detail::BaryPoly& poly, double c) {
          detail::quadrature_over(poly, g.area, rule,
                                  [&](const detail::BaryPoint& lam, double wt) {
                                    b[g.idx[0]] += wt * c * lam.l1;
                                    b[g.idx[1]] += wt * c * lam.l2;
                                    b[g.idx[2]] += wt * c * lam.l3;
                                  });
        };
        if (pieces.low.n) add_const(pieces.low, load.lo);
        if (pieces.high.n) add_const(pieces.high, load.hi);
        detail::quadrature_over(pieces.free, g.area, rule,
                                [&](const detail::BaryPoint& lam, double wt) {
                                  const double u =
                                      w[0] * lam.l1 + w[1] * lam.l2 + w[2] * lam.l3;
                                  b[g.idx[0]] += wt * u * lam.l1;
                                  b[g.idx[1]] += wt * u * lam.l2;
                                  b[g.idx[2]] += wt * u * lam.l3;
                                });
        break;
      }
    }
  }
}

}  // namespace

std::vector<double> assemble_load(const Mesh& mesh, const Load& load, int degree) {
  std::vector<double> b(mesh.node_count(), 0.0);
  std::visit(
      [&](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, P1Load>) {
          add_p1_load(mesh, *l.f, b);
        } else if constexpr (std::is_same_v<T, AnalyticLoad>) {
          add_analytic_load(mesh, l.f, degree, b);
        } else {
          add_clamped_load(mesh, l, degree, b);
        }
      },
      load);
  return b;
}

SparseMatrix assemble_clamp_sensitivity(const Mesh& mesh, const ClampedLoad& load,
                                        int degree) {
  require_mesh(load.base, "assemble_clamp_sensitivity");
  const QuadratureRule& rule = QuadratureRule::of_degree(degree);
  std::vector<Triplet> trips;
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    const std::array<double, 3> w = vertex_values(load.base, g);
    std::array<std::array<double, 3>, 3> acc{};
    if (!load.exact_split) {
      for (const QuadPoint& qp : rule.points()) {
        const double v = w[0] * qp.l1 + w[1] * qp.l2 + w[2] * qp.l3;
        if (v <= load.lo || v >= load.hi) continue;
        const double wt = g.area * qp.w;
        const std::array<double, 3> lam = {qp.l1, qp.l2, qp.l3};
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) acc[i][j] += wt * lam[i] * lam[j];
        }
      }
    } else {
      switch (classify_clamp(w, load.lo, load.hi)) {
        case ClampCase::all_low:
        case ClampCase::all_high:
          break;
        case ClampCase::all_free: {
          const double s = g.area / 12.0;
          for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) acc[i][j] = i == j ? 2.0 * s : s;
          }
          break;
        }
        case ClampCase::split: {
          const detail::ClampPieces pieces = detail::split_clamp(w, load.lo, load.hi);
          detail::quadrature_over(pieces.free, g.area, rule,
                                  [&](const detail::BaryPoint& lam, double wt) {
                                    const std::array<double, 3> l = {lam.l1, lam.l2, lam.l3};
                                    for (int i = 0; i < 3; ++i) {
                                      for (int j = 0; j < 3; ++j) acc[i][j] += wt * l[i] * l[j];
                                    }
                                  });
          break;
        }
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (acc[i][j] != 0.0) trips.push_back({g.idx[i], g.idx[j], acc[i][j]});
      }
    }
  }
  return SparseMatrix::from_triplets(static_cast<int>(mesh.node_count()), trips);
}

double clamped_l2_sq(const Mesh& mesh, const ClampedLoad& load, int degree) {
  require_mesh(load.base, "clamped_l2_sq");
  const QuadratureRule& rule = QuadratureRule::of_degree(degree);
  double total = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    const std::array<double, 3> w = vertex_values(load.base, g);
    switch (classify_clamp(w, load.lo, load.hi)) {
      case ClampCase::all_low:
        total += load.lo * load.lo * g.area;
        break;
      case ClampCase::all_high:
        total += load.hi * load.hi * g.area;
        break;
      case ClampCase::all_free:
        for (const QuadPoint& qp : rule.points()) {
          const double v = w[0] * qp.l1 + w[1] * qp.l2 + w[2] * qp.l3;
          total += g.area * qp.w * v * v;
        }
        break;
      case ClampCase::split: {
        const detail::ClampPieces pieces = detail::split_clamp(w, load.lo, load.hi);
        auto add_const = [&](const detail::BaryPoly& poly, double c) {
          detail::quadrature_over(poly, g.area, rule,
                                  [&](const detail::BaryPoint&, double wt) { total += wt * c * c; });
        };
        if (pieces.low.n) add_const(pieces.low, load.lo);
        if (pieces.high.n) add_const(pieces.high, load.hi);
        detail::quadrature_over(pieces.free, g.area, rule,
                                [&](const detail::BaryPoint& lam, double wt) {
                                  const double v = w[0] * lam.l1 + w[1] * lam.l2 + w[2] * lam.l3;
                                  total += wt * v * v;
                                });
        break;
      }
    }
  }
  return total;
}

std::vector<double> assemble_semilinear_term(const Mesh& mesh, const Nonlinearity& phi,
                                             const P1Function& y, int degree) {
  require_mesh(y, "assemble_semilinear_term");
  std::vector<double> out(mesh.node_count(), 0.0);
  add_semilinear_term(mesh, phi, y, degree, out);
  return out;
}

std::vector<double> assemble_semilinear_residual(const Mesh& mesh, const Nonlinearity& phi,
                                                 const P1Function& y, const Load& u_load,
                                                 int degree) {
  require_mesh(y, "assemble_semilinear_residual");
  const SparseMatrix A = assemble_stiffness(mesh);
  std::vector<double> r = A.multiply(y.values);
  add_semilinear_term(mesh, phi, y, degree, r);
  const std::vector<double> b = assemble_load(mesh, u_load, degree);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (mesh.boundary_mask[i]) r[i] = 0.0;
  }
  return r;
}

SparseMatrix assemble_semilinear_jacobian(const Mesh& mesh, const Nonlinearity& phi,
                                          const P1Function& y, int degree) {
  require_mesh(y, "assemble_semilinear_jacobian");
  const QuadratureRule& rule = QuadratureRule::of_degree(degree);
  std::vector<Triplet> trips;
  trips.reserve(mesh.triangle_count() * 18);
  add_stiffness_triplets(mesh, trips);
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    const std::array<double, 3> yv = vertex_values(y, g);
    std::array<std::array<double, 3>, 3> acc{};
    for (const QuadPoint& qp : rule.points()) {
      const double w =
          g.area * qp.w * phi.dphi(yv[0] * qp.l1 + yv[1] * qp.l2 + yv[2] * qp.l3);
      const std::array<double, 3> lam = {qp.l1, qp.l2, qp.l3};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) acc[i][j] += w * lam[i] * lam[j];
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) trips.push_back({g.idx[i], g.idx[j], acc[i][j]});
    }
  }
  return SparseMatrix::from_triplets(static_cast<int>(mesh.node_count()), trips);
}

P1Function solve_state(const Mesh& mesh, const Nonlinearity& phi, const Load& u_load,
                       double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_state: tolerance must be positive");
  const std::vector<int> interior = interior_nodes(mesh);
  const SparseMatrix A = assemble_stiffness(mesh);
  const std::vector<double> b = assemble_load(mesh, u_load);

  P1Function y(mesh);
  auto interior_residual = [&](const P1Function& yy) {
    std::vector<double> full = A.multiply(yy.values);
    add_semilinear_term(mesh, phi, yy, 8, full);
    std::vector<double> r(interior.size());
    for (std::size_t k = 0; k < interior.size(); ++k) {
      r[k] = full[interior[k]] - b[interior[k]];
    }
    return r;
  };

  std::vector<double> r = interior_residual(y);
  double rn = inf_norm(r);
  for (int it = 0; it < max_iter; ++it) {
    if (rn <= tol) return y;
    const SparseMatrix J = restrict_to(assemble_semilinear_jacobian(mesh, phi, y), interior);
    std::vector<double> rhs(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) rhs[k] = -r[k];
    const std::vector<double> dy = solve_spd(J, rhs);

    double step = 1.0;
    for (int halvings = 0;; ++halvings) {
      P1Function trial = y;
      for (std::size_t k = 0; k < interior.size(); ++k) {
        trial.values[interior[k]] += step * dy[k];
      }
      std::vector<double> rt = interior_residual(trial);
      const double rtn = inf_norm(rt);
      if (rtn < rn || halvings == 30) {
        y = std::move(trial);
        r = std::move(rt);
        rn = rtn;
        break;
      }
      step *= 0.5;
    }
  }
  if (rn <= tol) return y;
  throw NewtonDivergence("solve_state: residual " + std::to_string(rn) +
                             " above tolerance after " + std::to_string(max_iter) + " steps",
                         rn, max_iter);
}

P1Function ritz_projection(const Mesh& mesh, const GradientField& grad_w, int degree) {
  const QuadratureRule& rule = QuadratureRule::of_degree(degree);
  std::vector<double> load(mesh.node_count(), 0.0);
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    for (const QuadPoint& qp : rule.points()) {
      const Node x = physical_point(g, qp.l1, qp.l2, qp.l3);
      const std::array<double, 2> gw = grad_w(x.x, x.y);
      const double wt = g.area * qp.w;
      for (int i = 0; i < 3; ++i) {
        load[g.idx[i]] += wt * (gw[0] * g.grad[i][0] + gw[1] * g.grad[i][1]);
      }
    }
  }
  const std::vector<int> interior = interior_nodes(mesh);
  const SparseMatrix Ai = restrict_to(assemble_stiffness(mesh), interior);
  std::vector<double> rhs(interior.size());
  for (std::size_t k = 0; k < interior.size(); ++k) rhs[k] = load[interior[k]];
  const std::vector<double> sol = solve_spd(Ai, rhs);
  P1Function out(mesh);
  for (std::size_t k = 0; k < interior.size(); ++k) out.values[interior[k]] = sol[k];
  return out;
}

P1Function ritz_projection(const Mesh& mesh, const P1Function& w) {
  require_mesh(w, "ritz_projection");
  const SparseMatrix A = assemble_stiffness(mesh);
  const std::vector<double> load = A.multiply(w.values);
  const std::vector<int> interior = interior_nodes(mesh);
  const SparseMatrix Ai = restrict_to(A, interior);
  std::vector<double> rhs(interior.size());
  for (std::size_t k = 0; k < interior.size(); ++k) rhs[k] = load[interior[k]];
  const std::vector<double> sol = solve_spd(Ai, rhs);
  P1Function out(mesh);
  for (std::size_t k = 0; k < interior.size(); ++k) out.values[interior[k]] = sol[k];
  return out;
}

double lq_norm(const P1Function& f, double q) {
  require_mesh(f, "lq_norm");
  if (!(q >= 2.0)) throw std::invalid_argument("lq_norm: exponent must be >= 2");
  const Mesh& mesh = *f.mesh;
  const double qr = std::round(q);
  const bool integer = std::abs(q - qr) <= 1e-9 * std::max(1.0, std::abs(q));
  double total = 0.0;
  if (integer) {
    const int qi = static_cast<int>(qr);
    const QuadratureRule& rule = QuadratureRule::of_degree(qi);
    for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
      const ElementGeometry g = geometry(mesh, t);
      const std::array<double, 3> fv = vertex_values(f, g);
      if (qi % 2 == 0) {
        for (const QuadPoint& qp : rule.points()) {
          const double v = fv[0] * qp.l1 + fv[1] * qp.l2 + fv[2] * qp.l3;
          total += g.area * qp.w * ipow(v, qi);
        }
        continue;
      }
      // Odd power: integrate f^q and (-f)^q on the sign regions separately,
      // splitting along the zero line where the sign changes.
      const double fmin = std::min({fv[0], fv[1], fv[2]});
      const double fmax = std::max({fv[0], fv[1], fv[2]});
      if (fmin >= 0.0 || fmax <= 0.0) {
        const double sign = fmin >= 0.0 ? 1.0 : -1.0;
        for (const QuadPoint& qp : rule.points()) {
          const double v = fv[0] * qp.l1 + fv[1] * qp.l2 + fv[2] * qp.l3;
          total += g.area * qp.w * ipow(sign * v, qi);
        }
        continue;
      }
      const detail::BaryPoly pos =
          detail::clip_nonpositive(detail::whole_triangle(), {-fv[0], -fv[1], -fv[2]});
      const detail::BaryPoly neg =
          detail::clip_nonpositive(detail::whole_triangle(), {fv[0], fv[1], fv[2]});
      detail::quadrature_over(pos, g.area, rule,
                              [&](const detail::BaryPoint& lam, double wt) {
                                const double v = fv[0] * lam.l1 + fv[1] * lam.l2 + fv[2] * lam.l3;
                                total += wt * ipow(v, qi);
                              });
      detail::quadrature_over(neg, g.area, rule,
                              [&](const detail::BaryPoint& lam, double wt) {
                                const double v = fv[0] * lam.l1 + fv[1] * lam.l2 + fv[2] * lam.l3;
                                total += wt * ipow(-v, qi);
                              });
    }
    return std::pow(total, 1.0 / qi);
  }
  const QuadratureRule& rule = QuadratureRule::of_degree(12);
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    const std::array<double, 3> fv = vertex_values(f, g);
    for (const QuadPoint& qp : rule.points()) {
      const double v = fv[0] * qp.l1 + fv[1] * qp.l2 + fv[2] * qp.l3;
      total += g.area * qp.w * std::pow(std::abs(v), q);
    }
  }
  return std::pow(total, 1.0 / q);
}

double l2_error(const P1Function& f, const ScalarField& g, int degree) {
  require_mesh(f, "l2_error");
  const Mesh& mesh = *f.mesh;
  const QuadratureRule& rule = QuadratureRule::of_degree(degree);
  double total = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const ElementGeometry ge = geometry(mesh, t);
    const std::array<double, 3> fv = vertex_values(f, ge);
    for (const QuadPoint& qp : rule.points()) {
      const Node x = physical_point(ge, qp.l1, qp.l2, qp.l3);
      const double d = fv[0] * qp.l1 + fv[1] * qp.l2 + fv[2] * qp.l3 - g(x.x, x.y);
      total += ge.area * qp.w * d * d;
    }
  }
  return std::sqrt(total);
}

void export_p1_csv(const P1Function& f, const std::string& path) {
  require_mesh(f, "export_p1_csv");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_p1_csv: cannot open " + path);
  out.precision(17);
  out << "x,y,value\n";
  for (std::size_t i = 0; i < f.mesh->node_count(); ++i) {
    out << f.mesh->nodes[i].x << ',' << f.mesh->nodes[i].y << ',' << f.values[i] << '\n';
  }
}

}  // namespace optcert

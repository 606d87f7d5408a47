#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "optcert/linalg.hpp"
#include "optcert/mesh.hpp"
#include "optcert/nonlinearity.hpp"
#include "optcert/quadrature.hpp"

// Piecewise-linear finite elements on a uniform triangulation: assembly of
// stiffness, mass and semilinear forms, the nonlinear state solve, the Ritz
// projection and Lq norms that integrate piecewise polynomials exactly.
namespace optcert {

using ScalarField = std::function<double(double, double)>;
using GradientField = std::function<std::array<double, 2>(double, double)>;

// Coefficient evaluated inside triangle `tri` at barycentric coordinates
// (l1, l2, l3); used for mass matrices weighted by a pointwise factor.
using TriangleField = std::function<double(int tri, double l1, double l2, double l3)>;

struct P1Function {
  const Mesh* mesh = nullptr;
  std::vector<double> values;

  P1Function() = default;
  explicit P1Function(const Mesh& m) : mesh(&m), values(m.node_count(), 0.0) {}

  // Point evaluation with constant-time structured cell lookup. Arguments are
  // clamped to the unit square.
  double eval(double x, double y) const;
  double max_abs() const;
};

// Nodal interpolant of an analytic function.
P1Function interpolate(const Mesh& mesh, const ScalarField& f);

// Right-hand-side descriptors for load vectors b_i = integral of u * psi_i.
struct P1Load {
  const P1Function* f;
};
struct AnalyticLoad {
  ScalarField f;
};
// The pointwise clamp of a piecewise-linear function: u(x) = clamp(base(x),
// lo, hi). This is how projected controls enter loads without ever being
// interpolated back onto the mesh. With exact_split the triangles cut by the
// clamp level lines are split into polygonal pieces that are each integrated
// exactly; without it the clamp is merely sampled at quadrature points.
struct ClampedLoad {
  P1Function base;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool exact_split = true;

  double eval(double x, double y) const;
};
using Load = std::variant<P1Load, AnalyticLoad, ClampedLoad>;

SparseMatrix assemble_stiffness(const Mesh& mesh);
SparseMatrix assemble_mass(const Mesh& mesh);

// Entries integral of weight * psi_i * psi_j with the weight supplied per
// quadrature point.
SparseMatrix assemble_weighted_mass(const Mesh& mesh, const TriangleField& weight,
                                    int degree = 8);

// Load vector over all nodes (callers restrict to interior rows as needed).
std::vector<double> assemble_load(const Mesh& mesh, const Load& load, int degree = 8);

// Derivative of assemble_load for a ClampedLoad with respect to the nodal
// values of its base: the mass matrix of the region where the clamp is
// inactive, assembled with the same splitting policy as the load itself.
SparseMatrix assemble_clamp_sensitivity(const Mesh& mesh, const ClampedLoad& load,
                                        int degree = 8);

// Exact integral of u^2 for a clamped load (constant on clamped regions,
// linear in between).
double clamped_l2_sq(const Mesh& mesh, const ClampedLoad& load, int degree = 8);

// N(y)_i = integral of phi(y_h) psi_i over all nodes.
std::vector<double> assemble_semilinear_term(const Mesh& mesh, const Nonlinearity& phi,
                                             const P1Function& y, int degree = 8);

// Residual of the discrete semilinear state equation, A y + N(y) - b(u) with
// N(y)_i = integral of phi(y_h) psi_i. Entries at boundary nodes are zero;
// the meaningful rows are the interior ones.
std::vector<double> assemble_semilinear_residual(const Mesh& mesh, const Nonlinearity& phi,
                                                 const P1Function& y, const Load& u_load,
                                                 int degree = 8);

// A + W(y) with W_ij = integral of phi'(y_h) psi_j psi_i, over all nodes.
SparseMatrix assemble_semilinear_jacobian(const Mesh& mesh, const Nonlinearity& phi,
                                          const P1Function& y, int degree = 8);

// Newton iteration stalled: residual still above tolerance after the
// permitted number of steps.
class NewtonDivergence : public std::runtime_error {
 public:
  NewtonDivergence(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual(residual), iterations(iterations) {}
  double residual;
  int iterations;
};

// Solve A y + N(y) = b(u) for y in the zero-trace space by damped Newton from
// y = 0 (step halving on residual increase, at most 30 halvings per step).
P1Function solve_state(const Mesh& mesh, const Nonlinearity& phi, const Load& u_load,
                       double tol = 1e-12, int max_iter = 50);

// Stiffness-orthogonal projection onto the zero-trace P1 space. The analytic
// overload needs only the gradient of the projected function; the P1 overload
// integrates the piecewise-constant gradient exactly and reproduces members
// of the space identically.
P1Function ritz_projection(const Mesh& mesh, const GradientField& grad_w, int degree = 8);
P1Function ritz_projection(const Mesh& mesh, const P1Function& w);

// (integral of |f|^q)^(1/q) for q >= 2. Even integer exponents integrate f^q
// with a rule of matching degree (exact); odd integers split sign-changing
// triangles along the zero line first (exact); non-integer exponents fall
// back to a degree-12 rule and are accurate only to quadrature error.
// Exponents within 1e-9 of an integer are snapped to it.
double lq_norm(const P1Function& f, double q);

// L2 distance between a P1 function and an analytic field, by quadrature.
double l2_error(const P1Function& f, const ScalarField& g, int degree = 12);

// CSV export with header x,y,value, rows in node order.
void export_p1_csv(const P1Function& f, const std::string& path);

}  // namespace optcert

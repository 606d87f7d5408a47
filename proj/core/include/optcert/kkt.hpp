#pragma once

#include <limits>
#include <string>
#include <vector>

#include "optcert/fem.hpp"

// The discrete first-order optimality system of the tracking-type control
// problem: state equation, adjoint equation with nodal multipliers for state
// constraints, projection formula for the control, and complementarity. The
// whole system is solved at once by a semismooth Newton method with
// primal-dual active sets.
namespace optcert {

// Pointwise state bound; an empty function means that side is unbounded.
using BoundField = std::function<double(double, double)>;

struct OcpSpec {
  double alpha = 1.0;            // control cost weight
  ScalarField y0;                // desired state
  double u_lower = -std::numeric_limits<double>::infinity();
  double u_upper = std::numeric_limits<double>::infinity();
  BoundField y_lower;            // state bounds, enforced at constraint nodes
  BoundField y_upper;
  Region constraint_region = Region::none();
  Nonlinearity phi;
};

struct KktSolution {
  P1Function y;
  P1Function p;
  std::vector<double> mu;         // one multiplier per entry of constraints.indices
  ConstraintNodeSet constraints;  // interior constraint nodes carrying multipliers
  int iterations = 0;             // residual checks performed, including the final one
  double residual_inf = std::numeric_limits<double>::infinity();
  std::vector<int> active_lower;  // constraint nodes where the lower bound binds
  std::vector<int> active_upper;
  double control_active_measure = 0.0;  // fraction of quadrature points clamped
  bool converged = false;
};

struct KktOptions {
  double tol = 1e-10;             // on the max norm of the stacked residual
  int max_iter = 100;             // Newton steps
  double c = 1.0;                 // complementarity scaling
  bool approx_clamp = false;      // sample the clamp instead of exact splitting
  const KktSolution* warm_start = nullptr;
};

// The problem data cannot admit any solution: crossed control bounds, state
// bounds with y_a >= y_b at a constraint node, or state bounds excluding the
// zero boundary trace at a boundary constraint node.
class InfeasibleSpec : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Interior constraint nodes that carry multipliers, after validating the
// bounds at every node of the constraint region. Boundary nodes of the region
// are checked for compatibility with the zero trace and then dropped (test
// functions vanish there, so their multipliers never enter the system).
ConstraintNodeSet multiplier_nodes(const Mesh& mesh, const OcpSpec& spec);

// The control induced by an adjoint state, clamp(-p/alpha, u_lower, u_upper),
// kept as a clamped load rather than re-interpolated onto the mesh.
ClampedLoad control_from_adjoint(const P1Function& p, const OcpSpec& spec,
                                 bool exact_split = true);

// Stacked optimality residual [state; adjoint; complementarity]: the first
// two blocks run over interior nodes, the third over multiplier_nodes.
std::vector<double> kkt_residual(const OcpSpec& spec, const P1Function& y,
                                 const P1Function& p, const std::vector<double>& mu,
                                 double c = 1.0);

// Semismooth Newton solve of the full optimality system from a cold start
// (y = p = 0, mu = 0) or the supplied warm start. Throws NewtonDivergence if
// the residual stays above tolerance, InfeasibleSpec for inconsistent bounds.
KktSolution solve_kkt(const OcpSpec& spec, const Mesh& mesh, const KktOptions& options = {});

struct SweepEntry {
  double alpha = 0.0;
  KktSolution solution;
  bool failed = false;
  std::string diagnostic;
};

// Solves the same problem for each weight in the given strictly positive,
// non-increasing list, warm starting every solve from the previous success
// and retrying from a cold start on divergence. Per-weight failures are
// recorded in the entries; the sweep itself always runs to completion.
std::vector<SweepEntry> alpha_sweep(OcpSpec spec, const std::vector<double>& alphas_descending,
                                    const Mesh& mesh, const KktOptions& options = {});

// J(u) = 1/2 |y - y0|^2 + alpha/2 |u|^2 for the solution's projected control,
// with the tracking term integrated by a degree-12 rule and the control term
// integrated exactly.
double objective_value(const OcpSpec& spec, const KktSolution& sol);

}  // namespace optcert

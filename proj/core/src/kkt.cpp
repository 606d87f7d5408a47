#include "optcert/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace optcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double two_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void validate_spec(const OcpSpec& spec) {
  if (!(spec.alpha > 0.0)) throw std::invalid_argument("kkt: alpha must be positive");
  if (!spec.y0) throw std::invalid_argument("kkt: desired state is not set");
  if (!spec.phi.phi || !spec.phi.dphi || !spec.phi.ddphi) {
    throw std::invalid_argument("kkt: nonlinearity callbacks are not set");
  }
  if (spec.u_lower > spec.u_upper) {
    throw InfeasibleSpec("control bounds are crossed (lower > upper)");
  }
}

// Everything that is fixed across Newton iterations for one (spec, mesh) pair.
struct Workspace {
  const Mesh* mesh;
  const OcpSpec* spec;
  std::vector<int> interior;
  std::vector<int> int_pos;     // node index -> interior position, or -1
  ConstraintNodeSet cons;       // interior constraint nodes
  std::vector<double> ya, yb;   // bounds at those nodes (infinities allowed)
  std::vector<int> cons_pos;    // constraint k -> interior position of its node
  SparseMatrix A;
  SparseMatrix M;
  std::vector<double> g0;       // desired-state load over all nodes

  std::size_t ni() const { return interior.size(); }
  std::size_t nc() const { return cons.indices.size(); }
};

Workspace make_workspace(const Mesh& mesh, const OcpSpec& spec) {
  validate_spec(spec);
  Workspace w;
  w.mesh = &mesh;
  w.spec = &spec;
  w.interior = interior_nodes(mesh);
  w.int_pos.assign(mesh.node_count(), -1);
  for (std::size_t k = 0; k < w.interior.size(); ++k) {
    w.int_pos[w.interior[k]] = static_cast<int>(k);
  }
  w.cons = multiplier_nodes(mesh, spec);
  w.ya.reserve(w.cons.indices.size());
  w.yb.reserve(w.cons.indices.size());
  for (int j : w.cons.indices) {
    const Node& nd = mesh.nodes[j];
    w.ya.push_back(spec.y_lower ? spec.y_lower(nd.x, nd.y) : -kInf);
    w.yb.push_back(spec.y_upper ? spec.y_upper(nd.x, nd.y) : kInf);
    w.cons_pos.push_back(w.int_pos[j]);
  }
  w.A = assemble_stiffness(mesh);
  w.M = assemble_mass(mesh);
  // Desired-state load by one-point centroid quadrature per element. The
  // tabulated reference data is produced this way; richer rules shift the
  // adjoint by O(h^2) and the published digits with it. Exact for constants.
  w.g0.assign(mesh.node_count(), 0.0);
  for (const Triangle& tri : mesh.triangles) {
    const Node& a = mesh.nodes[tri.v[0]];
    const Node& b = mesh.nodes[tri.v[1]];
    const Node& c = mesh.nodes[tri.v[2]];
    const double area =
        0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
    const double s =
        area * spec.y0((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0) / 3.0;
    for (int v : tri.v) w.g0[v] += s;
  }
  return w;
}

// Stacked residual [state; adjoint; complementarity] at (y, p, mu).
std::vector<double> eval_residual(const Workspace& w, const P1Function& y,
                                  const P1Function& p, const std::vector<double>& mu,
                                  double c, bool exact_split) {
  const Mesh& mesh = *w.mesh;
  const OcpSpec& spec = *w.spec;
  const std::size_t ni = w.ni();
  const std::size_t nc = w.nc();
  std::vector<double> F(2 * ni + nc, 0.0);

  const ClampedLoad u = control_from_adjoint(p, spec, exact_split);
  const std::vector<double> b = assemble_load(mesh, Load(u), 8);
  const std::vector<double> Ay = w.A.multiply(y.values);
  const std::vector<double> Ny = assemble_semilinear_term(mesh, spec.phi, y, 8);
  for (std::size_t k = 0; k < ni; ++k) {
    const int i = w.interior[k];
    F[k] = Ay[i] + Ny[i] - b[i];
  }

  const SparseMatrix AW = assemble_semilinear_jacobian(mesh, spec.phi, y, 8);
  const std::vector<double> AWp = AW.multiply(p.values);
  const std::vector<double> My = w.M.multiply(y.values);
  for (std::size_t k = 0; k < ni; ++k) {
    const int i = w.interior[k];
    F[ni + k] = AWp[i] - My[i] + w.g0[i];
  }
  for (std::size_t k = 0; k < nc; ++k) {
    F[ni + w.cons_pos[k]] -= mu[k];
  }

  for (std::size_t k = 0; k < nc; ++k) {
    const double yk = y.values[w.cons.indices[k]];
    const double up = mu[k] + c * (yk - w.yb[k]);
    const double lo = mu[k] + c * (yk - w.ya[k]);
    F[2 * ni + k] = mu[k] - std::max(0.0, up) - std::min(0.0, lo);
  }
  return F;
}

void append_block(std::vector<Triplet>& trips, const SparseMatrix& m, int row_off,
                  int col_off, double scale) {
  const int* offs = m.row_offsets();
  const int* cols = m.col_indices();
  const double* vals = m.values();
  for (int r = 0; r < m.dim(); ++r) {
    for (int k = offs[r]; k < offs[r + 1]; ++k) {
      trips.push_back({row_off + r, col_off + cols[k], scale * vals[k]});
    }
  }
}

// Generalized derivative of the stacked residual. The complementarity rows
// freeze to one of two linear forms depending on which side of the max/min
// kinks the current iterate sits on; arguments exactly at a kink count as
// inactive.
SparseMatrix newton_matrix(const Workspace& w, const P1Function& y, const P1Function& p,
                           const std::vector<double>& mu, double c, bool exact_split) {
  const Mesh& mesh = *w.mesh;
  const OcpSpec& spec = *w.spec;
  const int ni = static_cast<int>(w.ni());
  const int nc = static_cast<int>(w.nc());
  std::vector<Triplet> trips;

  const SparseMatrix AWii =
      restrict_to(assemble_semilinear_jacobian(mesh, spec.phi, y, 8), w.interior);
  const TriangleField curvature = [&](int t, double l1, double l2, double l3) {
    const std::array<int, 3>& v = mesh.triangles[t].v;
    const double yy = y.values[v[0]] * l1 + y.values[v[1]] * l2 + y.values[v[2]] * l3;
    const double pp = p.values[v[0]] * l1 + p.values[v[1]] * l2 + p.values[v[2]] * l3;
    return spec.phi.ddphi(yy) * pp;
  };
  const SparseMatrix Dii = restrict_to(assemble_weighted_mass(mesh, curvature, 8), w.interior);
  const SparseMatrix Mii = restrict_to(w.M, w.interior);
  const ClampedLoad u = control_from_adjoint(p, spec, exact_split);
  const SparseMatrix Sii = restrict_to(assemble_clamp_sensitivity(mesh, u, 8), w.interior);

  append_block(trips, AWii, 0, 0, 1.0);
  append_block(trips, Sii, 0, ni, 1.0 / spec.alpha);
  append_block(trips, Dii, ni, 0, 1.0);
  append_block(trips, Mii, ni, 0, -1.0);
  append_block(trips, AWii, ni, ni, 1.0);
  for (int k = 0; k < nc; ++k) {
    trips.push_back({ni + w.cons_pos[k], 2 * ni + k, -1.0});
  }
  for (int k = 0; k < nc; ++k) {
    const double yk = y.values[w.cons.indices[k]];
    const bool upper = mu[k] + c * (yk - w.yb[k]) > 0.0;
    const bool lower = mu[k] + c * (yk - w.ya[k]) < 0.0;
    if (upper || lower) {
      trips.push_back({2 * ni + k, w.cons_pos[k], -c});
    } else {
      trips.push_back({2 * ni + k, 2 * ni + k, 1.0});
    }
  }
  return SparseMatrix::from_triplets(2 * ni + nc, trips);
}

void apply_step(const Workspace& w, P1Function& y, P1Function& p, std::vector<double>& mu,
                const std::vector<double>& dz, double s) {
  const std::size_t ni = w.ni();
  for (std::size_t k = 0; k < ni; ++k) {
    y.values[w.interior[k]] += s * dz[k];
    p.values[w.interior[k]] += s * dz[ni + k];
  }
  for (std::size_t k = 0; k < mu.size(); ++k) mu[k] += s * dz[2 * ni + k];
}

double active_measure(const Workspace& w, const P1Function& p) {
  const OcpSpec& spec = *w.spec;
  if (!std::isfinite(spec.u_lower) && !std::isfinite(spec.u_upper)) return 0.0;
  const Mesh& mesh = *w.mesh;
  const QuadratureRule& rule = QuadratureRule::of_degree(8);
  std::size_t clamped = 0;
  std::size_t total = 0;
  for (const Triangle& tri : mesh.triangles) {
    const std::array<double, 3> base = {-p.values[tri.v[0]] / spec.alpha,
                                        -p.values[tri.v[1]] / spec.alpha,
                                        -p.values[tri.v[2]] / spec.alpha};
    for (const QuadPoint& qp : rule.points()) {
      const double v = base[0] * qp.l1 + base[1] * qp.l2 + base[2] * qp.l3;
      ++total;
      if (v < spec.u_lower || v > spec.u_upper) ++clamped;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(clamped) / static_cast<double>(total);
}

}  // namespace

ConstraintNodeSet multiplier_nodes(const Mesh& mesh, const OcpSpec& spec) {
  const ConstraintNodeSet all = constraint_nodes(mesh, spec.constraint_region);
  ConstraintNodeSet kept;
  kept.region = all.region;
  for (int j : all.indices) {
    const Node& nd = mesh.nodes[j];
    const double ya = spec.y_lower ? spec.y_lower(nd.x, nd.y) : -kInf;
    const double yb = spec.y_upper ? spec.y_upper(nd.x, nd.y) : kInf;
    if (!(ya < yb)) {
      std::ostringstream msg;
      msg << "state bounds cross at constraint node (" << nd.x << ", " << nd.y << ")";
      throw InfeasibleSpec(msg.str());
    }
    if (mesh.boundary_mask[j]) {
      // Functions in the zero-trace space are pinned to 0 here, so the bounds
      // must admit it; the multiplier itself never enters the system.
      if (ya > 0.0 || yb < 0.0) {
        std::ostringstream msg;
        msg << "state bounds exclude the zero trace at boundary constraint node (" << nd.x
            << ", " << nd.y << ")";
        throw InfeasibleSpec(msg.str());
      }
      continue;
    }
    kept.indices.push_back(j);
  }
  return kept;
}

ClampedLoad control_from_adjoint(const P1Function& p, const OcpSpec& spec, bool exact_split) {
  if (!p.mesh) throw std::invalid_argument("control_from_adjoint: adjoint has no mesh");
  if (!(spec.alpha > 0.0)) {
    throw std::invalid_argument("control_from_adjoint: alpha must be positive");
  }
  ClampedLoad u;
  u.base = p;
  for (double& v : u.base.values) v = -v / spec.alpha;
  u.lo = spec.u_lower;
  u.hi = spec.u_upper;
  u.exact_split = exact_split;
  return u;
}

std::vector<double> kkt_residual(const OcpSpec& spec, const P1Function& y,
                                 const P1Function& p, const std::vector<double>& mu,
                                 double c) {
  if (!y.mesh || y.mesh != p.mesh) {
    throw std::invalid_argument("kkt_residual: state and adjoint must share a mesh");
  }
  if (!(c > 0.0)) throw std::invalid_argument("kkt_residual: scaling must be positive");
  const Workspace w = make_workspace(*y.mesh, spec);
  if (mu.size() != w.nc()) {
    throw std::invalid_argument("kkt_residual: multiplier count does not match the constraint nodes");
  }
  return eval_residual(w, y, p, mu, c, true);
}

KktSolution solve_kkt(const OcpSpec& spec, const Mesh& mesh, const KktOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve_kkt: tolerance must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("solve_kkt: max_iter must be positive");
  if (!(options.c > 0.0)) throw std::invalid_argument("solve_kkt: complementarity scaling must be positive");
  const Workspace w = make_workspace(mesh, spec);
  const bool exact = !options.approx_clamp;
  const std::size_t nc = w.nc();

  P1Function y(mesh), p(mesh);
  std::vector<double> mu(nc, 0.0);
  if (options.warm_start) {
    const KktSolution& ws = *options.warm_start;
    if (ws.y.values.size() != mesh.node_count() || ws.p.values.size() != mesh.node_count() ||
        ws.mu.size() != nc) {
      throw std::invalid_argument("solve_kkt: warm start does not match this mesh and spec");
    }
    y.values = ws.y.values;
    p.values = ws.p.values;
    mu = ws.mu;
  }

  std::vector<double> F = eval_residual(w, y, p, mu, options.c, exact);
  double fn2 = two_norm(F);
  double fni = inf_norm(F);
  int iterations = 0;
  bool converged = false;

  for (int step = 0; step <= options.max_iter; ++step) {
    iterations = step + 1;  // this pass checks the residual
    if (fni <= options.tol) {
      converged = true;
      break;
    }
    if (step == options.max_iter) break;

    const SparseMatrix J = newton_matrix(w, y, p, mu, options.c, exact);
    std::vector<double> rhs(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) rhs[i] = -F[i];
    const std::vector<double> dz = solve_general(J, rhs);

    // Backtracking on the Euclidean residual norm; if no damped step helps
    // (typical when the active set must change), commit the full step.
    P1Function ty(mesh), tp(mesh);
    std::vector<double> tmu, Ft;
    double tf2 = 0.0, tfi = 0.0;
    double stepsize = 1.0;
    bool accepted = false;
    for (int halvings = 0; halvings <= 30; ++halvings) {
      ty = y;
      tp = p;
      tmu = mu;
      apply_step(w, ty, tp, tmu, dz, stepsize);
      Ft = eval_residual(w, ty, tp, tmu, options.c, exact);
      tf2 = two_norm(Ft);
      tfi = inf_norm(Ft);
      if (tf2 <= (1.0 - 1e-4 * stepsize) * fn2) {
        accepted = true;
        break;
      }
      stepsize *= 0.5;
    }
    if (!accepted) {
      ty = y;
      tp = p;
      tmu = mu;
      apply_step(w, ty, tp, tmu, dz, 1.0);
      Ft = eval_residual(w, ty, tp, tmu, options.c, exact);
      tf2 = two_norm(Ft);
      tfi = inf_norm(Ft);
    }
    y = std::move(ty);
    p = std::move(tp);
    mu = std::move(tmu);
    F = std::move(Ft);
    fn2 = tf2;
    fni = tfi;
  }

  if (!converged) {
    throw NewtonDivergence("solve_kkt: residual " + std::to_string(fni) +
                               " above tolerance after " + std::to_string(options.max_iter) +
                               " steps",
                           fni, iterations);
  }

  KktSolution sol;
  sol.y = std::move(y);
  sol.p = std::move(p);
  sol.mu = std::move(mu);
  sol.constraints = w.cons;
  sol.iterations = iterations;
  sol.residual_inf = fni;
  sol.converged = true;
  for (std::size_t k = 0; k < nc; ++k) {
    const double yk = sol.y.values[w.cons.indices[k]];
    if (sol.mu[k] + options.c * (yk - w.yb[k]) > 0.0) {
      sol.active_upper.push_back(w.cons.indices[k]);
    } else if (sol.mu[k] + options.c * (yk - w.ya[k]) < 0.0) {
      sol.active_lower.push_back(w.cons.indices[k]);
    }
  }
  sol.control_active_measure = active_measure(w, sol.p);
  return sol;
}

std::vector<SweepEntry> alpha_sweep(OcpSpec spec, const std::vector<double>& alphas_descending,
                                    const Mesh& mesh, const KktOptions& options) {
  if (alphas_descending.empty())
    throw std::invalid_argument("alpha_sweep: weight list is empty");
  for (double a : alphas_descending) {
    if (!(a > 0.0)) throw std::invalid_argument("alpha_sweep: weights must be positive");
  }
  for (std::size_t i = 0; i + 1 < alphas_descending.size(); ++i) {
    if (alphas_descending[i] < alphas_descending[i + 1]) {
      throw std::invalid_argument("alpha_sweep: weights must be in non-increasing order");
    }
  }

  std::vector<SweepEntry> out;
  out.reserve(alphas_descending.size());
  KktSolution last;
  bool have_last = false;
  for (double a : alphas_descending) {
    spec.alpha = a;
    SweepEntry entry;
    entry.alpha = a;
    KktOptions opts = options;
    if (have_last) opts.warm_start = &last;
    try {
      entry.solution = solve_kkt(spec, mesh, opts);
    } catch (const InfeasibleSpec&) {
      throw;
    } catch (const std::runtime_error& e) {
      if (opts.warm_start) {
        opts.warm_start = nullptr;
        try {
          entry.solution = solve_kkt(spec, mesh, opts);
        } catch (const InfeasibleSpec&) {
          throw;
        } catch (const std::runtime_error& e2) {
          entry.failed = true;
          entry.diagnostic = e2.what();
        }
      } else {
        entry.failed = true;
        entry.diagnostic = e.what();
      }
    }
    if (!entry.failed) {
      last = entry.solution;
      have_last = true;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

double objective_value(const OcpSpec& spec, const KktSolution& sol) {
  if (!sol.y.mesh || !sol.p.mesh) {
    throw std::invalid_argument("objective_value: solution is empty");
  }
  validate_spec(spec);
  const Mesh& mesh = *sol.y.mesh;
  const double tracking = l2_error(sol.y, spec.y0, 12);
  const ClampedLoad u = control_from_adjoint(sol.p, spec);
  const double control_sq = clamped_l2_sq(mesh, u, 8);
  return 0.5 * tracking * tracking + 0.5 * spec.alpha * control_sq;
}

}  // namespace optcert

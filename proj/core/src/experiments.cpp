#include "optcert/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace optcert {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

// Threshold column is independent of the solve, so failed rows still get it.
double scenario_eta(const OcpSpec& ocp, double alpha) {
  double q = constants::q_of_r(ocp.phi.r);
  const double qr = std::round(q);
  if (std::abs(q - qr) <= 1e-9 * std::max(1.0, std::abs(q))) q = qr;
  const constants::GnBundle bundle = constants::gn_constant(q);
  return constants::eta(alpha, ocp.phi.r, ocp.phi.M, bundle.c_q);
}

void export_node_fields(const ScenarioSpec& spec, const OcpSpec& ocp, const Mesh& mesh,
                        double alpha, const KktSolution& sol) {
  namespace fs = std::filesystem;
  char sub[48];
  std::snprintf(sub, sizeof(sub), "alpha_%.1e", alpha);
  const fs::path dir = fs::path(spec.fields_dir) / sub;
  fs::create_directories(dir);

  export_p1_csv(sol.y, (dir / "y.csv").string());
  export_p1_csv(sol.p, (dir / "p.csv").string());

  P1Function u(mesh);
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    u.values[i] = std::clamp(-sol.p.values[i] / alpha, ocp.u_lower, ocp.u_upper);
  }
  export_p1_csv(u, (dir / "u.csv").string());

  P1Function mu_a(mesh), mu_b(mesh);
  for (std::size_t k = 0; k < sol.mu.size(); ++k) {
    const int j = sol.constraints.indices[k];
    mu_b.values[j] = std::max(sol.mu[k], 0.0);
    mu_a.values[j] = std::max(-sol.mu[k], 0.0);
  }
  export_p1_csv(mu_a, (dir / "mu_a.csv").string());
  export_p1_csv(mu_b, (dir / "mu_b.csv").string());
}

}  // namespace

ScalarField desired_state(DesiredTag tag) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  switch (tag) {
    case DesiredTag::a1:
      return [](double x1, double x2) {
        return 2.0 * std::sin(kTwoPi * x1) * std::sin(kTwoPi * x2);
      };
    case DesiredTag::a2:
      return [](double x1, double x2) {
        return 60.0 + 160.0 * (x1 * (x1 - 1.0) + x2 * (x2 - 1.0));
      };
    case DesiredTag::neitzel_const:
      return [](double, double) { return -1.0; };
  }
  throw std::invalid_argument("desired_state: unknown tag");
}

double neitzel_lower_bound(double x1, double x2) {
  const double m = std::min(std::min(0.5 * (x1 + x2), 0.5 * (1.0 + x1 - x2)),
                            std::min(0.5 * (1.0 - x1 + x2), 1.0 - 0.5 * (x1 + x2)));
  return -2.0 / 3.0 + m;
}

std::vector<std::string> normalize_scenario(ScenarioSpec& spec) {
  std::vector<std::string> warnings;
  if (spec.case_tag == CaseTag::neitzel) {
    if (spec.example != ExampleTag::cubic) {
      spec.example = ExampleTag::cubic;
      warnings.push_back("neitzel case uses the cubic nonlinearity; example overridden");
    }
    if (spec.desired != DesiredTag::neitzel_const) {
      spec.desired = DesiredTag::neitzel_const;
      warnings.push_back("neitzel case tracks the constant desired state -1; desired overridden");
    }
  } else if (spec.desired == DesiredTag::neitzel_const) {
    spec.desired = DesiredTag::a1;
    warnings.push_back("constant desired state belongs to the neitzel case; desired reset to a1");
  }
  return warnings;
}

OcpSpec make_ocp(const ScenarioSpec& spec) {
  OcpSpec ocp;
  ocp.alpha = 1.0;
  ocp.y0 = desired_state(spec.desired);
  ocp.phi = spec.example == ExampleTag::cubic ? cubic() : quintic();
  switch (spec.case_tag) {
    case CaseTag::unconstrained:
      break;
    case CaseTag::control_constrained:
      ocp.u_lower = -5.0;
      ocp.u_upper = 5.0;
      break;
    case CaseTag::state_constrained:
      ocp.y_lower = [](double, double) { return -1.0; };
      ocp.y_upper = [](double, double) { return 1.0; };
      ocp.constraint_region = Region::all_interior();
      break;
    case CaseTag::neitzel:
      ocp.y_lower = [](double x1, double x2) { return neitzel_lower_bound(x1, x2); };
      ocp.constraint_region = Region::all_interior();
      break;
  }
  return ocp;
}

ScenarioResult run_scenario(const ScenarioSpec& raw) {
  ScenarioSpec spec = raw;
  normalize_scenario(spec);
  if (spec.alphas.empty()) {
    throw std::invalid_argument("run_scenario: at least one regularization weight is required");
  }
  for (double a : spec.alphas) {
    if (!(a > 0.0)) throw std::invalid_argument("run_scenario: weights must be positive");
  }
  if (spec.jobs < 1) throw std::invalid_argument("run_scenario: jobs must be positive");

  const Mesh mesh = build_uniform(spec.n);
  const OcpSpec ocp = make_ocp(spec);

  // Solve from large alpha down so each solve warm-starts the next, then put
  // the rows back into the caller's order.
  std::vector<std::size_t> order(spec.alphas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return spec.alphas[a] > spec.alphas[b];
  });
  std::vector<double> descending(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) descending[k] = spec.alphas[order[k]];

  KktOptions opts;
  opts.approx_clamp = spec.approx_clamp;
  const std::vector<SweepEntry> entries = alpha_sweep(ocp, descending, mesh, opts);

  ScenarioResult result;
  result.rows.resize(spec.alphas.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const SweepEntry& entry = entries[k];
    ScenarioRow& row = result.rows[order[k]];
    row.alpha = entry.alpha;
    row.eta = scenario_eta(ocp, entry.alpha);
    if (entry.failed) {
      row.failed = true;
      row.diagnostic = entry.diagnostic;
      row.verdict = "failed";
      row.pnorm = kNan;
      row.objective = kNan;
      row.residual = kNan;
      row.iterations = 0;
      result.all_converged = false;
      continue;
    }
    OcpSpec at_alpha = ocp;
    at_alpha.alpha = entry.alpha;
    const Certificate cert = certify(entry.solution, at_alpha);
    row.pnorm = cert.norm;
    row.objective = objective_value(at_alpha, entry.solution);
    row.verdict = to_string(cert.verdict);
    row.iterations = entry.solution.iterations;
    row.residual = entry.solution.residual_inf;
    if (!spec.fields_dir.empty()) {
      export_node_fields(spec, at_alpha, mesh, entry.alpha, entry.solution);
    }
  }

  if (!spec.fields_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(spec.fields_dir);
    export_nodes_csv(mesh, (fs::path(spec.fields_dir) / "nodes.csv").string());
    export_triangles_csv(mesh, (fs::path(spec.fields_dir) / "triangles.csv").string());
  }
  if (!spec.out_csv.empty()) {
    write_table_csv(result.rows, spec.out_csv);
  }
  return result;
}

void write_table_csv(const std::vector<ScenarioRow>& rows, const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_table_csv: cannot open " + path);
  out << "alpha,pnorm,eta,J,verdict,iterations,residual\n";
  for (const ScenarioRow& r : rows) {
    out << fmt_sci(r.alpha) << ',' << fmt_sci(r.pnorm) << ',' << fmt_sci(r.eta) << ','
        << fmt_sci(r.objective) << ',' << r.verdict << ',' << r.iterations << ','
        << fmt_sci(r.residual) << '\n';
  }
  if (!out.good()) throw std::runtime_error("write_table_csv: write failed for " + path);
}

}  // namespace optcert

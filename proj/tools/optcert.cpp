#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "optcert/experiments.hpp"

namespace {

void print_row(const optcert::ScenarioRow& row) {
  std::printf("%.12e,%.12e,%.12e,%.12e,%s,%d,%.12e\n", row.alpha, row.pnorm, row.eta,
              row.objective, row.verdict.c_str(), row.iterations, row.residual);
}

int cmd_run(const optcert::ScenarioSpec& raw) {
  optcert::ScenarioSpec spec = raw;
  for (const std::string& w : optcert::normalize_scenario(spec)) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }
  const optcert::ScenarioResult result = optcert::run_scenario(spec);
  std::printf("alpha,pnorm,eta,J,verdict,iterations,residual\n");
  for (const optcert::ScenarioRow& row : result.rows) {
    print_row(row);
    if (row.failed) {
      std::fprintf(stderr, "alpha %.3e failed: %s\n", row.alpha, row.diagnostic.c_str());
    }
  }
  return result.all_converged ? 0 : 2;
}

int cmd_constants(double q) {
  const optcert::constants::GnBundle b = optcert::constants::gn_constant(q);
  std::printf("q       %.12e\n", b.q);
  std::printf("theta   %.12e\n", b.theta);
  if (b.c1.has_value()) {
    std::printf("bound1  %.12e\n", *b.c1);
  } else {
    std::printf("bound1  n/a (needs q >= 4)\n");
  }
  std::printf("bound2  %.12e\n", b.c2);
  std::printf("bound3  %.12e  (%d factors)\n", b.c3, b.truncation_terms);
  std::printf("c_q     %.12e\n", b.c_q);
  std::printf("1/c_q   %.12e\n", 1.0 / b.c_q);
  return 0;
}

int cmd_eta(double alpha, double r, double M) {
  double q = optcert::constants::q_of_r(r);
  const double qr = std::round(q);
  if (std::abs(q - qr) <= 1e-9 * std::max(1.0, std::abs(q))) q = qr;
  const optcert::constants::GnBundle b = optcert::constants::gn_constant(q);
  const double value = optcert::constants::eta(alpha, r, M, b.c_q);
  std::printf("q     %.12e\n", q);
  std::printf("c_q   %.12e\n", b.c_q);
  std::printf("eta   %.12e\n", value);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary-point solver and global-minimum certifier for a "
               "semilinear elliptic control problem"};
  app.require_subcommand(1);

  optcert::ScenarioSpec spec;
  spec.alphas = {1e3, 1e2, 1e1, 1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

  const std::map<std::string, optcert::ExampleTag> example_map{
      {"cubic", optcert::ExampleTag::cubic}, {"quintic", optcert::ExampleTag::quintic}};
  const std::map<std::string, optcert::CaseTag> case_map{
      {"unconstrained", optcert::CaseTag::unconstrained},
      {"control", optcert::CaseTag::control_constrained},
      {"state", optcert::CaseTag::state_constrained},
      {"neitzel", optcert::CaseTag::neitzel}};
  const std::map<std::string, optcert::DesiredTag> desired_map{
      {"a1", optcert::DesiredTag::a1}, {"a2", optcert::DesiredTag::a2}};

  CLI::App* run = app.add_subcommand("run", "Sweep the regularization weight and certify");
  run->add_option("--example", spec.example, "Nonlinearity")
      ->transform(CLI::CheckedTransformer(example_map, CLI::ignore_case));
  run->add_option("--case", spec.case_tag, "Constraint setup")
      ->transform(CLI::CheckedTransformer(case_map, CLI::ignore_case));
  run->add_option("--desired", spec.desired, "Desired state")
      ->transform(CLI::CheckedTransformer(desired_map, CLI::ignore_case));
  run->add_option("--alphas", spec.alphas, "Comma-separated regularization weights")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  run->add_option("--n", spec.n, "Mesh subdivisions per side")->check(CLI::Range(2, 4096));
  run->add_option("--out", spec.out_csv, "Write the table to this CSV file");
  run->add_option("--fields-out", spec.fields_dir, "Export nodal fields under this directory");
  run->add_flag("--approx-clamp", spec.approx_clamp,
                "Quadrature-sampled clamp instead of the exact split");
  run->add_option("--jobs", spec.jobs, "Worker bound for independent scenarios")
      ->check(CLI::PositiveNumber);

  double q = 4.0;
  CLI::App* constants = app.add_subcommand("constants", "Interpolation constant bounds");
  constants->add_option("--q", q, "Norm exponent")->required()->check(CLI::Range(2.0, 1e6));

  double eta_alpha = 1.0, eta_r = 2.0, eta_m = 2.0 * std::sqrt(3.0);
  CLI::App* eta = app.add_subcommand("eta", "Certification threshold");
  eta->add_option("--alpha", eta_alpha, "Regularization weight")->required()->check(CLI::PositiveNumber);
  eta->add_option("--r", eta_r, "Growth exponent")->required()->check(CLI::Range(1.0 + 1e-9, 1e6));
  eta->add_option("--M", eta_m, "Curvature-growth coefficient")->required()->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(spec);
    if (constants->parsed()) return cmd_constants(q);
    if (eta->parsed()) return cmd_eta(eta_alpha, eta_r, eta_m);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

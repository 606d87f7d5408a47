#pragma once

#include <string>
#include <vector>

#include "optcert/certificate.hpp"
#include "optcert/kkt.hpp"

namespace optcert {

enum class ExampleTag { cubic, quintic };
enum class CaseTag { unconstrained, control_constrained, state_constrained, neitzel };
enum class DesiredTag { a1, a2, neitzel_const };

// One sweep over regularization weights for a fixed example/case/desired-state
// combination on a uniform mesh. Rows are reported in the order the weights
// are listed here, whatever order the solver visits them in.
struct ScenarioSpec {
  ExampleTag example = ExampleTag::cubic;
  CaseTag case_tag = CaseTag::unconstrained;
  DesiredTag desired = DesiredTag::a1;
  std::vector<double> alphas;
  int n = 32;
  std::string out_csv;     // empty: no table file written
  std::string fields_dir;  // empty: no nodal field exports
  bool approx_clamp = false;
  int jobs = 1;  // worker bound when several scenarios run together
};

struct ScenarioRow {
  double alpha = 0.0;
  double pnorm = 0.0;
  double eta = 0.0;
  double objective = 0.0;
  std::string verdict;
  int iterations = 0;
  double residual = 0.0;
  bool failed = false;
  std::string diagnostic;
};

struct ScenarioResult {
  std::vector<ScenarioRow> rows;
  bool all_converged = true;
};

// Desired states: a1 is a smooth oscillation vanishing on the boundary, a2 a
// paraboloid that does not vanish there, neitzel_const the constant -1.
ScalarField desired_state(DesiredTag tag);

// Tent-shaped lower bound peaking at the domain center with value -1/6.
double neitzel_lower_bound(double x1, double x2);

// Rewrites fields that the chosen case pins down (the neitzel case fixes the
// nonlinearity and the desired state, for instance) and reports one warning
// per field it had to change. Idempotent.
std::vector<std::string> normalize_scenario(ScenarioSpec& spec);

// Control problem for a normalized scenario; alpha is left at 1 and is set
// per sweep entry.
OcpSpec make_ocp(const ScenarioSpec& spec);

ScenarioResult run_scenario(const ScenarioSpec& spec);

void write_table_csv(const std::vector<ScenarioRow>& rows, const std::string& path);

}  // namespace optcert

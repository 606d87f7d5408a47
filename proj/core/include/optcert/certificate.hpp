#pragma once

#include <optional>
#include <string>
#include <vector>

#include "optcert/constants.hpp"
#include "optcert/kkt.hpp"

namespace optcert {

// Outcome of the adjoint-norm test. A stationary point is certified when the
// L^q norm of the adjoint stays below the closed-form threshold eta(alpha, r):
// strictly below means the point is the unique global minimizer, exactly at
// the threshold (to within roundoff) still gives a global minimizer, and
// anything above is inconclusive rather than a disproof.
enum class Verdict { unique_global, global, inconclusive };

std::string to_string(Verdict v);

struct Certificate {
  double norm = 0.0;       // ||p||_{L^q}
  double threshold = 0.0;  // eta(alpha, r)
  double q = 0.0;          // dual-type exponent derived from the growth exponent
  double margin = 0.0;     // threshold - norm
  double kappa = 0.0;      // norm / threshold, 0 when the threshold is infinite
  Verdict verdict = Verdict::inconclusive;
};

// Evaluates the test for one converged stationary point. Throws
// std::invalid_argument if the solution is not converged and std::domain_error
// if the nonlinearity fails its own structure check.
Certificate certify(const KktSolution& sol, const OcpSpec& spec);

// Largest kappa across a family of certificates when every one of them is
// strictly below 1 (then the whole family is uniformly certified); nullopt as
// soon as one member reaches or exceeds 1. Empty input is an error.
std::optional<double> uniform_kappa(const std::vector<Certificate>& certs);

}  // namespace optcert

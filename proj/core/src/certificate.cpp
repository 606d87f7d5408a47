#include "optcert/certificate.hpp"

#include <cmath>
#include <stdexcept>

namespace optcert {

namespace {

// q comes out of floating-point arithmetic (e.g. r = 4/3 gives q within one
// ulp of 6), so pull it onto the integer when it is essentially there. The
// norm routine does the same snap; doing it here keeps the constants and the
// norm evaluated at the identical exponent.
double snap_integer(double q) {
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q))) return r;
  return q;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::unique_global:
      return "unique_global";
    case Verdict::global:
      return "global";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  throw std::logic_error("to_string: unknown verdict");
}

Certificate certify(const KktSolution& sol, const OcpSpec& spec) {
  if (!sol.converged) {
    throw std::invalid_argument("certify: solution has not converged");
  }
  if (!sol.p.mesh) throw std::invalid_argument("certify: solution is empty");
  check_structural_bound(spec.phi);

  Certificate cert;
  cert.q = snap_integer(constants::q_of_r(spec.phi.r));
  cert.norm = lq_norm(sol.p, cert.q);
  const constants::GnBundle bundle = constants::gn_constant(cert.q);
  cert.threshold = constants::eta(spec.alpha, spec.phi.r, spec.phi.M, bundle.c_q);
  cert.margin = cert.threshold - cert.norm;
  cert.kappa = std::isinf(cert.threshold) ? 0.0 : cert.norm / cert.threshold;
  if (cert.margin > 1e-12) {
    cert.verdict = Verdict::unique_global;
  } else if (cert.margin >= -1e-12) {
    cert.verdict = Verdict::global;
  } else {
    cert.verdict = Verdict::inconclusive;
  }
  return cert;
}

std::optional<double> uniform_kappa(const std::vector<Certificate>& certs) {
  if (certs.empty()) {
    throw std::invalid_argument("uniform_kappa: at least one certificate is required");
  }
  double worst = 0.0;
  for (const Certificate& c : certs) {
    if (!(c.kappa < 1.0)) return std::nullopt;
    worst = std::max(worst, c.kappa);
  }
  return worst;
}

}  // namespace optcert

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "optcert/certificate.hpp"
#include "optcert/constants.hpp"
#include "optcert/fem.hpp"
#include "optcert/kkt.hpp"
#include "optcert/mesh.hpp"
#include "optcert/nonlinearity.hpp"

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

optcert::OcpSpec tracking_spec(double alpha, optcert::Nonlinearity phi) {
  optcert::OcpSpec spec;
  spec.alpha = alpha;
  spec.y0 = [](double x, double y) {
    return 2.0 * std::sin(2.0 * kPi * x) * std::sin(2.0 * kPi * y);
  };
  spec.phi = std::move(phi);
  return spec;
}

}  // namespace

TEST_CASE("verdict names") {
  CHECK(optcert::to_string(optcert::Verdict::unique_global) == "unique_global");
  CHECK(optcert::to_string(optcert::Verdict::global) == "global");
  CHECK(optcert::to_string(optcert::Verdict::inconclusive) == "inconclusive");
}

TEST_CASE("certificate for a cubic stationary point") {
  const optcert::Mesh mesh = optcert::build_uniform(8);
  const optcert::OcpSpec spec = tracking_spec(1e-1, optcert::cubic());
  const optcert::KktSolution sol = optcert::solve_kkt(spec, mesh);
  REQUIRE(sol.converged);

  const optcert::Certificate cert = optcert::certify(sol, spec);
  // Growth exponent r = 2 pairs with the L^4 norm of the adjoint.
  CHECK(cert.q == 4.0);
  CHECK(cert.norm == doctest::Approx(optcert::lq_norm(sol.p, 4.0)).epsilon(1e-14));
  const double c4 = optcert::constants::gn_constant(4.0).c_q;
  CHECK(cert.threshold ==
        doctest::Approx(optcert::constants::eta(1e-1, 2.0, spec.phi.M, c4)).epsilon(1e-14));
  CHECK(cert.margin == doctest::Approx(cert.threshold - cert.norm).epsilon(1e-14));
  CHECK(cert.kappa == doctest::Approx(cert.norm / cert.threshold).epsilon(1e-14));
  CHECK(cert.kappa < 1.0);
  CHECK(cert.verdict == optcert::Verdict::unique_global);
}

TEST_CASE("quintic exponent snaps to the integer norm path") {
  const optcert::Mesh mesh = optcert::build_uniform(8);
  const optcert::OcpSpec spec = tracking_spec(1e-1, optcert::quintic());
  const optcert::KktSolution sol = optcert::solve_kkt(spec, mesh);
  REQUIRE(sol.converged);

  const optcert::Certificate cert = optcert::certify(sol, spec);
  // (3r - 2)/(r - 1) at r = 4/3 is 6 up to roundoff; the certificate must
  // land exactly on the integer so the norm is integrated exactly.
  CHECK(cert.q == 6.0);
  CHECK(cert.norm == doctest::Approx(optcert::lq_norm(sol.p, 6.0)).epsilon(1e-14));
}

TEST_CASE("a linear state equation certifies unconditionally") {
  optcert::Nonlinearity linear;
  linear.phi = [](double) { return 0.0; };
  linear.dphi = [](double) { return 0.0; };
  linear.ddphi = [](double) { return 0.0; };
  linear.r = 2.0;
  linear.M = 0.0;
  linear.label = "linear";

  const optcert::Mesh mesh = optcert::build_uniform(4);
  const optcert::OcpSpec spec = tracking_spec(1e-3, linear);
  const optcert::KktSolution sol = optcert::solve_kkt(spec, mesh);
  REQUIRE(sol.converged);

  const optcert::Certificate cert = optcert::certify(sol, spec);
  CHECK(std::isinf(cert.threshold));
  CHECK(cert.kappa == 0.0);
  CHECK(cert.verdict == optcert::Verdict::unique_global);
}

TEST_CASE("certification rejects bad inputs") {
  const optcert::Mesh mesh = optcert::build_uniform(4);
  const optcert::OcpSpec spec = tracking_spec(1e-1, optcert::cubic());

  // Not converged: certification refuses to evaluate.
  optcert::KktSolution blank;
  CHECK_THROWS_AS(optcert::certify(blank, spec), std::invalid_argument);

  // A claimed structural constant that the nonlinearity violates.
  const optcert::KktSolution sol = optcert::solve_kkt(spec, mesh);
  optcert::OcpSpec lied = spec;
  lied.phi.M = 0.5;
  CHECK_THROWS_AS(optcert::certify(sol, lied), std::domain_error);
}

TEST_CASE("weight sweep certificates and the uniform margin") {
  const optcert::Mesh mesh = optcert::build_uniform(8);
  optcert::OcpSpec spec = tracking_spec(1.0, optcert::cubic());
  // Bounded controls saturate as the weight shrinks, so the adjoint norm
  // stalls while the threshold keeps falling and the tail goes inconclusive.
  spec.u_lower = -5.0;
  spec.u_upper = 5.0;
  const std::vector<double> alphas = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  const std::vector<optcert::SweepEntry> entries = optcert::alpha_sweep(spec, alphas, mesh);

  std::vector<optcert::Certificate> certs;
  for (const optcert::SweepEntry& e : entries) {
    REQUIRE_FALSE(e.failed);
    optcert::OcpSpec at = spec;
    at.alpha = e.alpha;
    certs.push_back(optcert::certify(e.solution, at));
  }

  // The threshold shrinks like a power of alpha while the adjoint norm
  // saturates, so the verdict flips from certified to inconclusive once and
  // never back.
  CHECK(certs.front().verdict == optcert::Verdict::unique_global);
  CHECK(certs.back().verdict == optcert::Verdict::inconclusive);
  bool seen_inconclusive = false;
  for (const optcert::Certificate& c : certs) {
    if (c.verdict == optcert::Verdict::inconclusive) seen_inconclusive = true;
    else CHECK_FALSE(seen_inconclusive);
  }

  // Uniform certification fails over the whole family but holds on the
  // certified prefix, where the worst kappa is reported.
  CHECK_FALSE(optcert::uniform_kappa(certs).has_value());
  std::vector<optcert::Certificate> prefix;
  for (const optcert::Certificate& c : certs)
    if (c.verdict != optcert::Verdict::inconclusive) prefix.push_back(c);
  REQUIRE_FALSE(prefix.empty());
  const std::optional<double> uk = optcert::uniform_kappa(prefix);
  REQUIRE(uk.has_value());
  double worst = 0.0;
  for (const optcert::Certificate& c : prefix) worst = std::max(worst, c.kappa);
  CHECK(*uk == doctest::Approx(worst).epsilon(1e-15));
  CHECK(*uk < 1.0);

  CHECK_THROWS_AS(optcert::uniform_kappa({}), std::invalid_argument);
}

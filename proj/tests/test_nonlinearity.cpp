#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "optcert/constants.hpp"
#include "optcert/nonlinearity.hpp"

namespace {

// Adaptive Simpson on [0, 1], plenty for the smooth integrands below.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

double integrate01(const std::function<double(double)>& f) {
  return adaptive_simpson(f, 0.0, 1.0, f(0.0), f(0.5), f(1.0), 1e-13, 40);
}

}  // namespace

TEST_CASE("cubic nonlinearity") {
  const optcert::Nonlinearity nl = optcert::cubic();
  CHECK(nl.phi(2.0) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(nl.phi(-1.5) == doctest::Approx(-3.375).epsilon(1e-15));
  CHECK(nl.dphi(2.0) == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(nl.ddphi(-2.0) == doctest::Approx(-12.0).epsilon(1e-15));
  CHECK(nl.r == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(nl.M == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-15));
  CHECK_NOTHROW(optcert::check_structural_bound(nl));
}

TEST_CASE("quintic nonlinearity") {
  const optcert::Nonlinearity nl = optcert::quintic();
  CHECK(nl.phi(2.0) == doctest::Approx(32.0).epsilon(1e-15));
  CHECK(nl.dphi(-2.0) == doctest::Approx(80.0).epsilon(1e-15));
  CHECK(nl.ddphi(2.0) == doctest::Approx(160.0).epsilon(1e-15));
  CHECK(nl.r == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(nl.M == doctest::Approx(5.9813951248848821676).epsilon(1e-15));
  CHECK_NOTHROW(optcert::check_structural_bound(nl));
}

TEST_CASE("general power nonlinearity") {
  // power(4) must coincide with cubic, including for negative arguments where
  // the |s|^(k-2) s form matters.
  const optcert::Nonlinearity p4 = optcert::power(4.0);
  const optcert::Nonlinearity cub = optcert::cubic();
  for (double s : {-2.5, -1.0, -0.3, 0.0, 0.7, 1.9}) {
    CHECK(p4.phi(s) == doctest::Approx(cub.phi(s)).epsilon(1e-14));
    CHECK(p4.dphi(s) == doctest::Approx(cub.dphi(s)).epsilon(1e-14));
    CHECK(p4.ddphi(s) == doctest::Approx(cub.ddphi(s)).epsilon(1e-14));
  }
  CHECK(p4.r == doctest::Approx(cub.r).epsilon(1e-15));
  CHECK(p4.M == doctest::Approx(cub.M).epsilon(1e-14));

  const optcert::Nonlinearity p5 = optcert::power(5.0);
  CHECK(p5.phi(-2.0) == doctest::Approx(-16.0).epsilon(1e-14));
  CHECK(p5.dphi(-2.0) == doctest::Approx(32.0).epsilon(1e-14));
  CHECK(p5.ddphi(-2.0) == doctest::Approx(-48.0).epsilon(1e-14));
  CHECK(p5.r == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(p5.M == doctest::Approx(3.0 * std::cbrt(4.0)).epsilon(1e-14));
  CHECK_NOTHROW(optcert::check_structural_bound(p5));

  CHECK_THROWS_AS(optcert::power(3.0), std::invalid_argument);
  CHECK_THROWS_AS(optcert::power(2.0), std::invalid_argument);
}

TEST_CASE("structural check rejects violations") {
  // Understate M: the bound |phi''| <= M phi'^(1/r) fails away from zero.
  optcert::Nonlinearity bad = optcert::cubic();
  bad.M = 1.0;
  bad.label = "cubic-understated";
  CHECK_THROWS_AS(optcert::check_structural_bound(bad), std::domain_error);

  // Decreasing phi is rejected regardless of the bound.
  optcert::Nonlinearity dec;
  dec.phi = [](double s) { return -s; };
  dec.dphi = [](double) { return -1.0; };
  dec.ddphi = [](double) { return 0.0; };
  dec.r = 2.0;
  dec.M = 100.0;
  dec.label = "decreasing";
  CHECK_THROWS_AS(optcert::check_structural_bound(dec), std::domain_error);

  optcert::Nonlinearity unset = optcert::cubic();
  unset.r = 1.0;
  CHECK_THROWS_AS(optcert::check_structural_bound(unset), std::domain_error);
}

TEST_CASE("mean-slope perturbation inequality") {
  // The global-optimality argument rests on, for every pair a, b,
  //   |int_0^1 phi'(ta + (1-t)b) - phi'(b) dt|
  //     <= |a - b| * L_r * (int_0^1 phi'(ta + (1-t)b) dt)^(1/r)
  // with L_r the structural constant. Sample it densely for both built-ins.
  std::mt19937 rng(987654321);
  std::uniform_real_distribution<double> pts(-5.0, 5.0);
  for (const optcert::Nonlinearity& nl : {optcert::cubic(), optcert::quintic()}) {
    const double lr = optcert::constants::l_r(nl.r, nl.M);
    int failures = 0;
    for (int i = 0; i < 10000; ++i) {
      const double a = pts(rng);
      const double b = pts(rng);
      const double mean_slope =
          integrate01([&](double t) { return nl.dphi(t * a + (1.0 - t) * b); });
      const double deviation = mean_slope - nl.dphi(b);
      const double rhs = std::abs(a - b) * lr * std::pow(mean_slope, 1.0 / nl.r);
      if (!(std::abs(deviation) <= rhs + 1e-9)) ++failures;
    }
    CHECK(failures == 0);
  }
}

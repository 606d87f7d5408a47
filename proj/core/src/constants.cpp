#include "optcert/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace optcert::constants {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

[[noreturn]] void fail(const char* fn, const char* what, double value) {
  std::ostringstream msg;
  msg << fn << ": " << what << " (got " << value << ")";
  throw std::invalid_argument(msg.str());
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) fail("gamma_fn", "argument must be positive", x);
  return std::tgamma(x);
}

double beta_fn(double a, double b) {
  if (!(a > 0.0)) fail("beta_fn", "first argument must be positive", a);
  if (!(b > 0.0)) fail("beta_fn", "second argument must be positive", b);
  // Work in log space so moderate arguments cannot overflow the quotient.
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double k_babenko(double p) {
  if (!(p > 1.0 && p <= 2.0)) fail("k_babenko", "exponent must lie in (1, 2]", p);
  const double pc = p / (p - 1.0);
  return std::pow(p / (2.0 * kPi), 1.0 / p) * std::pow(pc / (2.0 * kPi), -1.0 / pc);
}

double c22theta(double s) {
  if (!(s >= 1.0 && s < 2.0)) fail("c22theta", "exponent must lie in [1, 2)", s);
  if (s == 1.0) return 2.0 * std::sqrt(kPi);
  return std::pow(2.0, 1.0 / s) * std::pow((2.0 - s) / (s - 1.0), (s - 1.0) / s) *
         std::sqrt(2.0 * kPi * beta_fn(2.0 / s, 3.0 - 2.0 / s));
}

double gn_bound_1(double q) {
  if (!(q >= 4.0)) fail("gn_bound_1", "not applicable below q = 4", q);
  const double theta = 1.0 - 2.0 / q;
  return std::pow(theta * c22theta(2.0 * theta), -theta);
}

double gn_bound_2(double q) {
  if (!(q > 2.0)) fail("gn_bound_2", "requires q > 2", q);
  const double theta = 1.0 - 2.0 / q;
  const double b = beta_fn(1.0, (1.0 - theta) / theta);
  const double p = 4.0 / (2.0 + 2.0 * theta);
  return std::pow(theta, -theta / 2.0) * std::pow(1.0 - theta, -(1.0 - theta) / 2.0) *
         std::pow(2.0 * kPi * b, theta / 2.0) * k_babenko(p);
}

Bound3 gn_bound_3(double q, double tail_tol) {
  if (!(q >= 2.0)) fail("gn_bound_3", "requires q >= 2", q);
  if (!(tail_tol >= 0.0)) fail("gn_bound_3", "tail tolerance must be nonnegative", tail_tol);
  double log_val = (q - 2.0) / (2.0 * q) * -std::log(kPi);
  int terms = 0;
  // The log-factors decay geometrically once j is in the tail, but the
  // exponent 2^j + 2 - q crosses zero at one interior j whenever q - 2 is a
  // power of two (q = 6 hits it at j = 2), so a single small increment is not
  // proof of the tail. Two consecutive ones are: the accidental zero is
  // isolated.
  bool prev_small = false;
  for (int j = 2; j <= 64; ++j) {
    const double tj = std::ldexp(1.0, j);
    const double increment =
        (tj + 2.0 - q) / (tj * q) * std::log(tj / (tj + q - 2.0));
    log_val += increment;
    ++terms;
    const bool small = std::abs(increment) < tail_tol;
    if (small && prev_small) break;
    prev_small = small;
  }
  return {std::exp(log_val), terms};
}

GnBundle gn_constant(double q, double tail_tol) {
  if (!(q >= 2.0)) fail("gn_constant", "requires q >= 2", q);
  GnBundle bundle;
  bundle.q = q;
  bundle.theta = 1.0 - 2.0 / q;
  bundle.c1 = q >= 4.0 ? std::optional<double>(gn_bound_1(q)) : std::nullopt;
  bundle.c2 = q > 2.0 ? gn_bound_2(q) : std::numeric_limits<double>::infinity();
  const Bound3 third = gn_bound_3(q, tail_tol);
  bundle.c3 = third.value;
  bundle.truncation_terms = third.terms;
  bundle.c_q = std::min(bundle.c2, bundle.c3);
  return bundle;
}

double q_of_r(double r) {
  if (!(r > 1.0)) fail("q_of_r", "requires r > 1", r);
  return (3.0 * r - 2.0) / (r - 1.0);
}

double rho_of(double r, double q) {
  if (!(r > 1.0)) fail("rho_of", "requires r > 1", r);
  if (!(q > 0.0)) fail("rho_of", "requires q > 0", q);
  return (r + q) / (r * q);
}

double l_r(double r, double M) {
  if (!(r > 1.0)) fail("l_r", "requires r > 1", r);
  if (!(M >= 0.0)) fail("l_r", "requires M >= 0", M);
  return M * std::pow((r - 1.0) / (2.0 * r - 1.0), (r - 1.0) / r);
}

double d_r(double r, double q, double rho) {
  return std::pow(q, -1.0 / q) * std::pow(r, -1.0 / r) * std::pow(rho, -rho);
}

double e_r(double rho) {
  if (!(rho > 0.0 && rho < 2.0)) fail("e_r", "requires rho in (0, 2)", rho);
  return std::pow(1.0 - rho / 2.0, 1.0 - rho / 2.0) * std::pow(rho / 2.0, rho / 2.0);
}

double eta(const EtaInputs& in) {
  if (!(in.alpha > 0.0)) fail("eta", "alpha must be positive", in.alpha);
  if (!(in.r > 1.0)) fail("eta", "requires r > 1", in.r);
  if (!(in.M >= 0.0)) fail("eta", "requires M >= 0", in.M);
  if (!(in.c_q > 0.0) || std::isinf(in.c_q)) fail("eta", "c_q must be positive and finite", in.c_q);
  const double q = q_of_r(in.r);
  const double rho = rho_of(in.r, q);
  if (!(q >= 3.0)) fail("eta", "derived exponent q fell below 3", q);
  if (!(rho > 0.0 && rho < 1.0)) fail("eta", "derived exponent rho left (0, 1)", rho);
  if (in.M == 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(in.alpha, rho / 2.0) * std::pow(in.c_q, (2.0 - 2.0 * in.r) / in.r) / in.M *
         std::pow((in.r - 1.0) / (2.0 * in.r - 1.0), (1.0 - in.r) / in.r) *
         std::pow(q, 1.0 / q) * std::pow(in.r, 1.0 / in.r) * std::pow(rho, rho / 2.0) *
         std::pow(2.0 - rho, rho / 2.0 - 1.0);
}

double eta(double alpha, double r, double M, double c_q) {
  return eta(EtaInputs{alpha, r, M, c_q});
}

}  // namespace optcert::constants

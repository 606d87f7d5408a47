#pragma once

#include <optional>

// Closed-form constants behind the smallness certificate: Gagliardo-Nirenberg
// interpolation bounds on the unit square and the threshold eta(alpha, r) that
// an adjoint Lq norm is compared against.
namespace optcert::constants {

// Gamma function restricted to positive arguments (the only region we need,
// and the restriction keeps pole handling out of callers).
double gamma_fn(double x);

// Euler beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b), a, b > 0.
double beta_fn(double a, double b);

// Babenko-Beckner constant for exponents p in (1, 2]:
//   k_B(p) = (p / 2pi)^(1/p) * (p' / 2pi)^(-1/p'),  1/p + 1/p' = 1.
double k_babenko(double p);

// Sharp constant C_{2,s} of the embedding H^1 -> L^infinity-type bound used
// by the first interpolation estimate, for s in [1, 2). At s = 1 the closed
// form collapses to exactly 2 sqrt(pi).
double c22theta(double s);

// First Gagliardo-Nirenberg bound, valid for q >= 4 only (the inner exponent
// leaves the admissible window below that). Throws std::invalid_argument with
// a "not applicable" message for q < 4.
double gn_bound_1(double q);

// Second bound, valid for q > 2. Throws std::invalid_argument for q <= 2.
double gn_bound_2(double q);

// Third bound, an infinite product evaluated in log space. Factors are
// included until two consecutive indices j >= 2 contribute log increments
// below tail_tol in magnitude (both are still included), with a hard cap at
// j = 64. A single small increment is not trusted because the factor
// exponent has an isolated interior zero when q - 2 is a power of two.
// `terms` records how many product factors were accumulated.
struct Bound3 {
  double value;
  int terms;
};
Bound3 gn_bound_3(double q, double tail_tol = 1e-15);

// All three bounds for one exponent. c1 is absent below q = 4, c2 is +inf at
// q = 2 (the formula degenerates there), and c_q = min(c2, c3) is the value
// the certificate uses.
struct GnBundle {
  double q;
  double theta;           // 1 - 2/q
  std::optional<double> c1;
  double c2;
  double c3;
  double c_q;
  int truncation_terms;   // product factors used by the third bound
};
GnBundle gn_constant(double q, double tail_tol = 1e-15);

// Duality pairing between the growth exponent r > 1 of the nonlinearity and
// the Lebesgue exponent the certificate measures the adjoint in.
double q_of_r(double r);

// rho = (r + q) / (r q), always in (0, 1) for the exponents produced above.
double rho_of(double r, double q);

// L_r = M ((r - 1) / (2r - 1))^((r - 1)/r), the structural constant entering
// the threshold denominator.
double l_r(double r, double M);

// d_r = q^(-1/q) r^(-1/r) rho^(-rho).
double d_r(double r, double q, double rho);

// e_r = (1 - rho/2)^(1 - rho/2) (rho/2)^(rho/2).
double e_r(double rho);

// Inputs for the certification threshold. alpha is the control cost weight,
// r and M the structural exponent/constant of the nonlinearity, c_q the
// interpolation constant for q_of_r(r).
struct EtaInputs {
  double alpha;
  double r;
  double M;
  double c_q;
};

// Threshold eta(alpha, r). M = 0 (linear state equation) makes every
// stationary point globally optimal, reported as +infinity.
double eta(const EtaInputs& in);
double eta(double alpha, double r, double M, double c_q);

}  // namespace optcert::constants

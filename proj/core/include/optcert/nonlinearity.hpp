#pragma once

// The monotone nonlinearity phi entering the state equation, together with
// the structural pair (r, M) bounding |phi''| <= M * phi'^(1/r). That pair
// determines the norm exponent and the certification threshold downstream.

#include <functional>
#include <string>

namespace optcert {

struct Nonlinearity {
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  std::function<double(double)> ddphi;
  double r = 0.0;  // structural exponent, > 1
  double M = 0.0;  // structural constant, >= 0
  std::string label;
};

// phi(s) = s^3, r = 2, M = 2*sqrt(3).
Nonlinearity cubic();

// phi(s) = s^5, r = 4/3, M = 20 / 5^(3/4).
Nonlinearity quintic();

// phi(s) = |s|^(k-2) * s for k > 3; r = (k-2)/(k-3), M = (k-2)*(k-1)^(1/(k-2)).
// power(4) coincides with cubic().
Nonlinearity power(double k);

// Samples the structural inequality |phi''(s)| <= M * phi'(s)^(1/r) + 1e-9 and
// monotonicity phi' >= 0 on [lo, hi]; throws std::domain_error with a
// diagnostic on violation. Certification calls this before trusting (r, M).
void check_structural_bound(const Nonlinearity& nl, double lo = -50.0, double hi = 50.0,
                            int samples = 10001);

}  // namespace optcert

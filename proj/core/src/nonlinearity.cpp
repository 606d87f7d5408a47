#include "optcert/nonlinearity.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace optcert {

Nonlinearity cubic() {
  Nonlinearity nl;
  nl.phi = [](double s) { return s * s * s; };
  nl.dphi = [](double s) { return 3.0 * s * s; };
  nl.ddphi = [](double s) { return 6.0 * s; };
  nl.r = 2.0;
  nl.M = 2.0 * std::sqrt(3.0);
  nl.label = "cubic";
  return nl;
}

Nonlinearity quintic() {
  Nonlinearity nl;
  nl.phi = [](double s) { return s * s * s * s * s; };
  nl.dphi = [](double s) { return 5.0 * s * s * s * s; };
  nl.ddphi = [](double s) { return 20.0 * s * s * s; };
  nl.r = 4.0 / 3.0;
  nl.M = 20.0 / std::pow(5.0, 0.75);
  nl.label = "quintic";
  return nl;
}

Nonlinearity power(double k) {
  if (!(k > 3.0)) {
    throw std::invalid_argument("power: exponent must exceed 3 (the structural exponent degenerates otherwise)");
  }
  Nonlinearity nl;
  nl.phi = [k](double s) { return std::pow(std::abs(s), k - 2.0) * s; };
  nl.dphi = [k](double s) { return (k - 1.0) * std::pow(std::abs(s), k - 2.0); };
  nl.ddphi = [k](double s) {
    const double mag = (k - 1.0) * (k - 2.0) * std::pow(std::abs(s), k - 3.0);
    return s >= 0.0 ? mag : -mag;
  };
  nl.r = (k - 2.0) / (k - 3.0);
  nl.M = (k - 2.0) * std::pow(k - 1.0, 1.0 / (k - 2.0));
  std::ostringstream label;
  label << "power:" << k;
  nl.label = label.str();
  return nl;
}

void check_structural_bound(const Nonlinearity& nl, double lo, double hi, int samples) {
  if (!(nl.r > 1.0)) {
    throw std::domain_error("check_structural_bound: exponent r must exceed 1 (" + nl.label + ")");
  }
  if (nl.M < 0.0) {
    throw std::domain_error("check_structural_bound: constant M must be nonnegative (" + nl.label + ")");
  }
  if (samples < 2) throw std::invalid_argument("check_structural_bound: need at least 2 samples");
  const double slack = 1e-9;
  for (int i = 0; i < samples; ++i) {
    const double s = lo + (hi - lo) * i / (samples - 1);
    const double d1 = nl.dphi(s);
    if (d1 < -slack) {
      std::ostringstream msg;
      msg << "check_structural_bound: " << nl.label << " is not monotone, phi'(" << s
          << ") = " << d1;
      throw std::domain_error(msg.str());
    }
    const double lhs = std::abs(nl.ddphi(s));
    const double rhs = nl.M * std::pow(std::max(d1, 0.0), 1.0 / nl.r) + slack;
    if (lhs > rhs) {
      std::ostringstream msg;
      msg << "check_structural_bound: " << nl.label << " violates |phi''| <= M*phi'^(1/r) at s="
          << s << " (" << lhs << " > " << rhs << ")";
      throw std::domain_error(msg.str());
    }
  }
}

}  // namespace optcert

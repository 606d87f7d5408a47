#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "optcert/linalg.hpp"

namespace {

double rel_residual(const optcert::SparseMatrix& a, const std::vector<double>& x,
                    const std::vector<double>& b) {
  const std::vector<double> ax = a.multiply(x);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    num += (ax[i] - b[i]) * (ax[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("triplet assembly sums duplicates") {
  const optcert::SparseMatrix a = optcert::SparseMatrix::from_triplets(
      3, {{0, 0, 1.0}, {0, 0, 2.0}, {1, 2, -4.0}, {2, 1, 0.5}, {1, 2, 1.0}});
  CHECK(a.dim() == 3);
  CHECK(a.coeff(0, 0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(a.coeff(1, 2) == doctest::Approx(-3.0).epsilon(1e-15));
  CHECK(a.coeff(2, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(a.coeff(2, 2) == 0.0);
  CHECK(a.max_abs() == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("multiply matches a dense reference") {
  const optcert::SparseMatrix a = optcert::SparseMatrix::from_triplets(
      3, {{0, 0, 2.0}, {0, 2, 1.0}, {1, 1, -1.0}, {2, 0, 4.0}, {2, 2, 3.0}});
  const std::vector<double> x = {1.0, 2.0, -1.0};
  const std::vector<double> y = a.multiply(x);
  REQUIRE(y.size() == 3);
  CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(y[1] == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(y[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(a.multiply(std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("symmetry gap") {
  const optcert::SparseMatrix sym = optcert::SparseMatrix::from_triplets(
      2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 5.0}});
  CHECK(sym.symmetry_gap() == doctest::Approx(0.0).epsilon(1e-15));
  const optcert::SparseMatrix asym = optcert::SparseMatrix::from_triplets(
      2, {{0, 1, 2.0}, {1, 0, 1.5}});
  CHECK(asym.symmetry_gap() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("principal submatrix restriction") {
  const optcert::SparseMatrix a = optcert::SparseMatrix::from_triplets(
      4, {{0, 0, 1.0}, {1, 1, 2.0}, {1, 3, 7.0}, {2, 2, 3.0}, {3, 1, -7.0}, {3, 3, 4.0}});
  const optcert::SparseMatrix sub = optcert::restrict_to(a, {1, 3});
  CHECK(sub.dim() == 2);
  CHECK(sub.coeff(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sub.coeff(0, 1) == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(sub.coeff(1, 0) == doctest::Approx(-7.0).epsilon(1e-15));
  CHECK(sub.coeff(1, 1) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("spd solve meets its residual guarantee") {
  // 1D Laplacian, a well-conditioned SPD workhorse.
  const int n = 50;
  std::vector<optcert::Triplet> trip;
  for (int i = 0; i < n; ++i) {
    trip.push_back({i, i, 2.0});
    if (i + 1 < n) {
      trip.push_back({i, i + 1, -1.0});
      trip.push_back({i + 1, i, -1.0});
    }
  }
  const optcert::SparseMatrix a = optcert::SparseMatrix::from_triplets(n, trip);
  std::vector<double> b(n);
  for (int i = 0; i < n; ++i) b[i] = std::sin(0.37 * i) + 0.2;
  const std::vector<double> x = optcert::solve_spd(a, b);
  CHECK(rel_residual(a, x, b) <= 1e-12);
}

TEST_CASE("general solve handles unsymmetric systems") {
  const int n = 40;
  std::vector<optcert::Triplet> trip;
  for (int i = 0; i < n; ++i) {
    trip.push_back({i, i, 4.0 + 0.1 * i});
    if (i + 1 < n) trip.push_back({i, i + 1, -1.5});
    if (i >= 1) trip.push_back({i, i - 1, 0.5});
    if (i + 7 < n) trip.push_back({i, i + 7, 0.25});
  }
  const optcert::SparseMatrix a = optcert::SparseMatrix::from_triplets(n, trip);
  std::vector<double> b(n, 1.0);
  const std::vector<double> x = optcert::solve_general(a, b);
  CHECK(rel_residual(a, x, b) <= 1e-10);
}

TEST_CASE("singular systems are reported") {
  const optcert::SparseMatrix a = optcert::SparseMatrix::from_triplets(
      2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 4.0}});
  CHECK_THROWS_AS(optcert::solve_general(a, std::vector<double>{1.0, 1.0}),
                  optcert::SingularMatrixError);
}

TEST_CASE("dimension mismatches are rejected") {
  const optcert::SparseMatrix a =
      optcert::SparseMatrix::from_triplets(2, {{0, 0, 1.0}, {1, 1, 1.0}});
  CHECK_THROWS_AS(optcert::solve_spd(a, std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(optcert::solve_general(a, std::vector<double>{1.0, 2.0, 3.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(optcert::SparseMatrix::from_triplets(2, {{0, 2, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(optcert::SparseMatrix::from_triplets(-1, {}), std::invalid_argument);
}

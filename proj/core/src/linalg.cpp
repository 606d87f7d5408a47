#include "optcert/linalg.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <cmath>
#include <limits>
#include <string>

namespace optcert {

SparseMatrix SparseMatrix::from_triplets(int dim, const std::vector<Triplet>& triplets) {
  if (dim < 0) throw std::invalid_argument("SparseMatrix: negative dimension");
  std::vector<Eigen::Triplet<double>> ts;
  ts.reserve(triplets.size());
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= dim || t.col < 0 || t.col >= dim) {
      throw std::invalid_argument("SparseMatrix: triplet index out of range");
    }
    ts.emplace_back(t.row, t.col, t.value);
  }
  SparseMatrix m;
  m.m_.resize(dim, dim);
  m.m_.setFromTriplets(ts.begin(), ts.end());
  m.m_.makeCompressed();
  return m;
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim()) {
    throw std::invalid_argument("SparseMatrix::multiply: size mismatch");
  }
  Eigen::VectorXd r = m_ * Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
  return std::vector<double>(r.data(), r.data() + r.size());
}

double SparseMatrix::symmetry_gap() const {
  Eigen::SparseMatrix<double, Eigen::RowMajor> d = m_ - Eigen::SparseMatrix<double, Eigen::RowMajor>(m_.transpose());
  double g = 0.0;
  for (int k = 0; k < d.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(d, k); it; ++it) {
      g = std::max(g, std::abs(it.value()));
    }
  }
  return g;
}

double SparseMatrix::max_abs() const {
  double g = 0.0;
  for (int k = 0; k < m_.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m_, k); it; ++it) {
      g = std::max(g, std::abs(it.value()));
    }
  }
  return g;
}

SparseMatrix restrict_to(const SparseMatrix& a, const std::vector<int>& keep) {
  std::vector<int> pos(a.dim(), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const int i = keep[k];
    if (i < 0 || i >= a.dim()) throw std::invalid_argument("restrict_to: index out of range");
    pos[i] = static_cast<int>(k);
  }
  std::vector<Triplet> trips;
  const int* offs = a.row_offsets();
  const int* cols = a.col_indices();
  const double* vals = a.values();
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const int row = keep[k];
    for (int idx = offs[row]; idx < offs[row + 1]; ++idx) {
      const int cp = pos[cols[idx]];
      if (cp >= 0) trips.push_back({static_cast<int>(k), cp, vals[idx]});
    }
  }
  return SparseMatrix::from_triplets(static_cast<int>(keep.size()), trips);
}

namespace {

// Solve with the given factorization, then run iterative refinement until the
// relative residual drops under tol (or stops improving). Returns the final
// relative residual.
template <typename Factorization>
double refine(const Factorization& fact, const Eigen::SparseMatrix<double>& A,
              const Eigen::VectorXd& b, Eigen::VectorXd& x, double tol) {
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero();
    return 0.0;
  }
  x = fact.solve(b);
  double rel = (b - A * x).norm() / bnorm;
  for (int pass = 0; pass < 4 && rel > tol; ++pass) {
    Eigen::VectorXd r = b - A * x;
    Eigen::VectorXd dx = fact.solve(r);
    Eigen::VectorXd xn = x + dx;
    const double reln = (b - A * xn).norm() / bnorm;
    if (reln >= rel) break;
    x = xn;
    rel = reln;
  }
  return rel;
}

void check_dims(const SparseMatrix& A, const std::vector<double>& b, const char* where) {
  if (static_cast<int>(b.size()) != A.dim()) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch");
  }
}

}  // namespace

std::vector<double> solve_spd(const SparseMatrix& A, const std::vector<double>& b) {
  check_dims(A, b, "solve_spd");
  const Eigen::SparseMatrix<double> Ac(A.eigen());  // column-major copy for the factorization
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Ac);
  if (ldlt.info() != Eigen::Success) {
    throw LinearSolverFailure("solve_spd: LDLT factorization failed (matrix not SPD?)",
                              std::numeric_limits<double>::quiet_NaN());
  }
  const Eigen::Map<const Eigen::VectorXd> bv(b.data(), b.size());
  Eigen::VectorXd x(A.dim());
  const double rel = refine(ldlt, Ac, bv, x, 1e-13);
  if (rel > 1e-12) {
    throw LinearSolverFailure("solve_spd: relative residual " + std::to_string(rel) +
                                  " exceeds 1e-12",
                              rel);
  }
  return std::vector<double>(x.data(), x.data() + x.size());
}

std::vector<double> solve_general(const SparseMatrix& A, const std::vector<double>& b) {
  check_dims(A, b, "solve_general");
  const Eigen::SparseMatrix<double> Ac(A.eigen());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(Ac);
  lu.factorize(Ac);
  if (lu.info() != Eigen::Success) {
    throw SingularMatrixError("solve_general: factorization failed, matrix is singular or near-singular");
  }
  const Eigen::Map<const Eigen::VectorXd> bv(b.data(), b.size());
  Eigen::VectorXd x(A.dim());
  const double rel = refine(lu, Ac, bv, x, 1e-12);
  if (!std::isfinite(rel)) {
    throw SingularMatrixError("solve_general: non-finite solution, matrix is singular");
  }
  if (rel > 1e-10) {
    throw LinearSolverFailure("solve_general: relative residual " + std::to_string(rel) +
                                  " exceeds 1e-10",
                              rel);
  }
  return std::vector<double>(x.data(), x.data() + x.size());
}

}  // namespace optcert

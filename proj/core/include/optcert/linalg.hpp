#pragma once

// Sparse linear algebra used by every solve in the project. Matrices are
// stored in compressed sparse row form; factorizations are delegated to
// Eigen's direct solvers with an iterative-refinement wrapper that enforces
// the residual guarantees stated below.

#include <Eigen/SparseCore>

#include <stdexcept>
#include <vector>

namespace optcert {

struct Triplet {
  int row;
  int col;
  double value;
};

class LinearSolverFailure : public std::runtime_error {
 public:
  LinearSolverFailure(const std::string& what, double residual)
      : std::runtime_error(what), achieved_residual(residual) {}
  double achieved_residual;
};

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Duplicate (row, col) entries are summed.
  static SparseMatrix from_triplets(int dim, const std::vector<Triplet>& triplets);

  int dim() const { return static_cast<int>(m_.rows()); }
  std::size_t nonzeros() const { return static_cast<std::size_t>(m_.nonZeros()); }

  // CSR storage access
  const int* row_offsets() const { return m_.outerIndexPtr(); }
  const int* col_indices() const { return m_.innerIndexPtr(); }
  const double* values() const { return m_.valuePtr(); }

  double coeff(int row, int col) const { return m_.coeff(row, col); }
  std::vector<double> multiply(const std::vector<double>& x) const;

  // max_ij |A_ij - A_ji|
  double symmetry_gap() const;
  double max_abs() const;

  const Eigen::SparseMatrix<double, Eigen::RowMajor>& eigen() const { return m_; }

 private:
  Eigen::SparseMatrix<double, Eigen::RowMajor> m_;
};

// Principal submatrix with rows and columns restricted to `keep`, reindexed
// in the order given. Used to drop Dirichlet rows before factorizing.
SparseMatrix restrict_to(const SparseMatrix& a, const std::vector<int>& keep);

// Cholesky-type solve for symmetric positive definite systems. The result
// satisfies ||Ax-b||_2 / ||b||_2 <= 1e-12 (refined if necessary) or a
// LinearSolverFailure carrying the achieved residual is thrown.
std::vector<double> solve_spd(const SparseMatrix& A, const std::vector<double>& b);

// Sparse LU for general nonsingular systems; relative residual <= 1e-10.
// Singular inputs raise SingularMatrixError.
std::vector<double> solve_general(const SparseMatrix& A, const std::vector<double>& b);

}  // namespace optcert

#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace tuplesim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
// Row-major so iteration order matches the canonical (row, col) triplet order.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct Triplet {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  double value = 0.0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

// Builds a compressed matrix from triplets; duplicates are summed and
// non-positive results dropped, which keeps the "stored values > 0" invariant.
SparseMatrix make_sparse(Eigen::Index n_rows, Eigen::Index n_cols,
                         const std::vector<Triplet>& triplets);

std::vector<Triplet> to_triplets(const SparseMatrix& m);

// out(i,j) = max(0, log(f_ij * F / (f_i. * f_.j))), natural log; zero and
// negative-PMI cells are not stored. Throws data_error("empty counts") if the
// input has no positive entry.
SparseMatrix ppmi_transform(const SparseMatrix& counts);

struct SvdFactors {
  Matrix u;      // n_rows x r, column-orthonormal
  Vector sigma;  // r, nonincreasing, >= 0 (exact zeros when rank deficient)
  Matrix v;      // n_cols x r, column-orthonormal
  Eigen::Index rank() const { return sigma.size(); }
};

// Top-r singular triplets via subspace iteration on the Gram matrix of the
// smaller side, with Rayleigh-Ritz extraction. Relative tolerance 1e-8, at
// most 10000 iterations; throws numerical_error on non-convergence.
SvdFactors truncated_svd(const SparseMatrix& m, Eigen::Index r);

// U_k diag(sigma_k^p). Convention: 0^0 = 0, so exactly-zero singular values
// never contribute. Throws std::invalid_argument("rank exceeded") if k > r.
Matrix project_rows(const SvdFactors& f, Eigen::Index k, double p);

// Symmetric eigendecomposition by cyclic Jacobi rotations. Eigenvalues are
// returned in nonincreasing order, eigenvectors as matching columns.
void jacobi_eigen(const Matrix& symmetric, Vector& eigenvalues, Matrix& eigenvectors);

template <typename DerivedA, typename DerivedB>
double cosine(const Eigen::MatrixBase<DerivedA>& u,
              const Eigen::MatrixBase<DerivedB>& v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("cosine: length mismatch");
  }
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;  // no-evidence convention
  return u.template cast<double>().dot(v.template cast<double>()) / (nu * nv);
}

}  // namespace tuplesim

#include "tuplesim/linalg.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "tuplesim/errors.hpp"
#include "tuplesim/util.hpp"

namespace tuplesim {

namespace {

constexpr double kSvdTolerance = 1e-8;
constexpr int kSvdMaxIterations = 10000;
constexpr double kZeroSigmaRel = 1e-12;  // below this (relative), a sigma is exact 0

}  // namespace

SparseMatrix make_sparse(Eigen::Index n_rows, Eigen::Index n_cols,
                         const std::vector<Triplet>& triplets) {
  if (n_rows < 0 || n_cols < 0) {
    throw std::invalid_argument("make_sparse: negative dimension");
  }
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(triplets.size());
  for (const auto& t : triplets) {
    if (t.row >= static_cast<std::uint64_t>(n_rows) ||
        t.col >= static_cast<std::uint64_t>(n_cols)) {
      throw std::out_of_range("make_sparse: triplet out of bounds");
    }
    entries.emplace_back(static_cast<int>(t.row), static_cast<int>(t.col), t.value);
  }
  SparseMatrix m(n_rows, n_cols);
  m.setFromTriplets(entries.begin(), entries.end());  // sums duplicates
  m.prune([](const Eigen::Index&, const Eigen::Index&, const double& v) {
    return v > 0.0;
  });
  m.makeCompressed();
  return m;
}

std::vector<Triplet> to_triplets(const SparseMatrix& m) {
  std::vector<Triplet> out;
  out.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (Eigen::Index outer = 0; outer < m.outerSize(); ++outer) {
    for (SparseMatrix::InnerIterator it(m, outer); it; ++it) {
      out.push_back({static_cast<std::uint32_t>(it.row()),
                     static_cast<std::uint32_t>(it.col()), it.value()});
    }
  }
  return out;
}

SparseMatrix ppmi_transform(const SparseMatrix& counts) {
  Vector row_sums = Vector::Zero(counts.rows());
  Vector col_sums = Vector::Zero(counts.cols());
  double total = 0.0;
  for (Eigen::Index outer = 0; outer < counts.outerSize(); ++outer) {
    for (SparseMatrix::InnerIterator it(counts, outer); it; ++it) {
      if (it.value() <= 0.0) continue;
      row_sums(it.row()) += it.value();
      col_sums(it.col()) += it.value();
      total += it.value();
    }
  }
  if (total <= 0.0) throw data_error("empty counts");

  std::vector<Triplet> out;
  for (Eigen::Index outer = 0; outer < counts.outerSize(); ++outer) {
    for (SparseMatrix::InnerIterator it(counts, outer); it; ++it) {
      if (it.value() <= 0.0) continue;
      const double pmi =
          std::log(it.value() * total / (row_sums(it.row()) * col_sums(it.col())));
      if (pmi > 0.0) {
        out.push_back({static_cast<std::uint32_t>(it.row()),
                       static_cast<std::uint32_t>(it.col()), pmi});
      }
    }
  }
  return make_sparse(counts.rows(), counts.cols(), out);
}

void jacobi_eigen(const Matrix& symmetric, Vector& eigenvalues, Matrix& eigenvectors) {
  if (symmetric.rows() != symmetric.cols()) {
    throw std::invalid_argument("jacobi_eigen: matrix must be square");
  }
  const Eigen::Index n = symmetric.rows();
  Matrix a = 0.5 * (symmetric + symmetric.transpose());
  Matrix v = Matrix::Identity(n, n);

  const double scale = a.norm();
  const double stop = 1e-14 * std::max(scale, 1e-300);
  constexpr int kMaxSweeps = 100;

  bool converged = (scale == 0.0) || (n < 2);
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    }
    if (std::sqrt(off) <= stop) {
      converged = true;
      break;
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Classic symmetric Schur rotation: pick t = tan(theta) with |t| <= 1.
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0)
                             ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    }
    if (std::sqrt(off) > stop) {
      throw numerical_error("jacobi_eigen: failed to converge");
    }
  }

  // Nonincreasing eigenvalue order; ties keep rotation order.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&a](Eigen::Index i, Eigen::Index j) {
    return a(i, i) > a(j, j);
  });
  eigenvalues.resize(n);
  eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    eigenvalues(i) = a(order[static_cast<std::size_t>(i)],
                       order[static_cast<std::size_t>(i)]);
    eigenvectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
}

namespace {

Matrix orthonormal_columns(const Matrix& z) {
  Eigen::HouseholderQR<Matrix> qr(z);
  return qr.householderQ() * Matrix::Identity(z.rows(), z.cols());
}

// Orthogonalizes columns in order against their predecessors (two MGS passes)
// and renormalizes; collapsed columns are flagged with a zero norm.
void reorthonormalize(Matrix& b, std::vector<bool>& valid) {
  for (Eigen::Index i = 0; i < b.cols(); ++i) {
    if (!valid[static_cast<std::size_t>(i)]) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < i; ++j) {
        if (!valid[static_cast<std::size_t>(j)]) continue;
        b.col(i) -= b.col(j).dot(b.col(i)) * b.col(j);
      }
    }
    const double norm = b.col(i).norm();
    if (norm < 1e-8) {
      valid[static_cast<std::size_t>(i)] = false;
      b.col(i).setZero();
    } else {
      b.col(i) /= norm;
    }
  }
}

// Fills invalid columns with deterministic orthonormal completions (canonical
// basis vectors, orthogonalized against everything already present).
void complete_columns(Matrix& b, std::vector<bool>& valid) {
  const Eigen::Index n = b.rows();
  Eigen::Index n_valid = 0;
  for (bool v : valid) n_valid += v ? 1 : 0;
  if (n_valid == b.cols()) return;

  // Trailing columns of the full Householder Q of the valid block are an
  // exact orthonormal completion, even when nearly the whole basis is
  // missing (where greedy re-orthogonalization of canonical vectors fails).
  Matrix kept(n, n_valid);
  Eigen::Index at = 0;
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    if (valid[static_cast<std::size_t>(j)]) kept.col(at++) = b.col(j);
  }
  Matrix q = n_valid == 0
                 ? Matrix::Identity(n, n)
                 : Matrix(Eigen::HouseholderQR<Matrix>(kept).householderQ());

  Eigen::Index next = n_valid;
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    if (valid[static_cast<std::size_t>(j)]) continue;
    if (next >= n) {
      throw numerical_error("truncated_svd: cannot complete orthonormal basis");
    }
    b.col(j) = q.col(next++);
    valid[static_cast<std::size_t>(j)] = true;
  }
}

}  // namespace

SvdFactors truncated_svd(const SparseMatrix& m, Eigen::Index r) {
  const Eigen::Index n_rows = m.rows();
  const Eigen::Index n_cols = m.cols();
  const Eigen::Index d = std::min(n_rows, n_cols);
  if (r < 1) throw std::invalid_argument("truncated_svd: rank must be positive");
  if (r > d) {
    throw std::invalid_argument("truncated_svd: rank exceeds matrix dimensions");
  }

  // Gram matrix of the smaller side keeps the eigenproblem as small as possible.
  const bool cols_small = n_cols <= n_rows;
  const SparseMatrix mt = SparseMatrix(m.transpose());
  const Matrix gram =
      cols_small ? Matrix(SparseMatrix(mt * m)) : Matrix(SparseMatrix(m * mt));

  const Eigen::Index s = std::min(d, r + 8);  // oversampled subspace
  Rng rng(0x5ab5bacec0de00ULL);
  Matrix q(d, s);
  for (Eigen::Index j = 0; j < s; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) q(i, j) = rng.uniform() - 0.5;
  }
  q = orthonormal_columns(q);

  Vector theta;
  Matrix ritz;  // d x s, Ritz vectors of the Gram matrix
  bool converged = false;
  for (int iter = 0; iter < kSvdMaxIterations; ++iter) {
    const Matrix z = gram * q;
    Matrix h = q.transpose() * z;
    h = 0.5 * (h + h.transpose()).eval();
    Matrix w;
    jacobi_eigen(h, theta, w);
    ritz = q * w;
    const Matrix residual = z * w - ritz * theta.asDiagonal();
    const double lambda_scale = std::max(theta(0), 1e-300);
    bool ok = true;
    for (Eigen::Index i = 0; i < r; ++i) {
      if (residual.col(i).norm() > kSvdTolerance * lambda_scale) {
        ok = false;
        break;
      }
    }
    if (ok) {
      converged = true;
      break;
    }
    q = orthonormal_columns(z);  // power step
  }
  if (!converged) throw numerical_error("truncated_svd: failed to converge");

  // Small-side singular vectors come straight from the Ritz basis; the other
  // side and the singular values come from applying the matrix itself, which
  // is more accurate for small sigmas than sqrt of a Gram eigenvalue.
  Matrix small_vecs = ritz.leftCols(r);
  const Eigen::Index n_big = cols_small ? n_rows : n_cols;
  Matrix big_vecs = Matrix::Zero(n_big, r);
  Vector sigma(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const Vector t = cols_small ? Vector(m * small_vecs.col(i))
                                : Vector(mt * small_vecs.col(i));
    sigma(i) = t.norm();
    if (sigma(i) > 0.0) big_vecs.col(i) = t / sigma(i);
  }
  const double sigma_max = sigma.size() > 0 ? sigma.maxCoeff() : 0.0;

  // Nonincreasing sigma order (recomputation can reorder near-ties).
  std::vector<Eigen::Index> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&sigma](Eigen::Index i, Eigen::Index j) {
                     return sigma(i) > sigma(j);
                   });
  Vector sigma_sorted(r);
  Matrix small_sorted(small_vecs.rows(), r);
  Matrix big_sorted(big_vecs.rows(), r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    sigma_sorted(i) = sigma(src);
    small_sorted.col(i) = small_vecs.col(src);
    big_sorted.col(i) = big_vecs.col(src);
  }

  // Exactly-zero sigmas get deterministic orthonormal filler vectors on the
  // big side so both factors stay column-orthonormal.
  std::vector<bool> big_valid(static_cast<std::size_t>(r), true);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (sigma_sorted(i) <= kZeroSigmaRel * sigma_max) {
      sigma_sorted(i) = 0.0;
      big_valid[static_cast<std::size_t>(i)] = false;
      big_sorted.col(i).setZero();
    }
  }
  reorthonormalize(big_sorted, big_valid);
  complete_columns(big_sorted, big_valid);

  SvdFactors f;
  if (cols_small) {
    f.u = std::move(big_sorted);
    f.v = std::move(small_sorted);
  } else {
    f.u = std::move(small_sorted);
    f.v = std::move(big_sorted);
  }
  f.sigma = std::move(sigma_sorted);

  // Sign convention: the largest-magnitude entry of each left vector is
  // positive (ties resolved to the lowest index), so factors are reproducible.
  for (Eigen::Index i = 0; i < r; ++i) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < f.u.rows(); ++j) {
      const double mag = std::abs(f.u(j, i));
      if (mag > best) {
        best = mag;
        arg = j;
      }
    }
    if (f.u(arg, i) < 0.0) {
      f.u.col(i) = -f.u.col(i);
      f.v.col(i) = -f.v.col(i);
    }
  }
  return f;
}

Matrix project_rows(const SvdFactors& f, Eigen::Index k, double p) {
  if (k < 0 || k > f.rank()) throw std::invalid_argument("rank exceeded");
  Vector weights(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    // 0^0 = 0 here: an exactly-zero singular value carries no information,
    // so its dimension is dropped even at p = 0.
    weights(i) = (f.sigma(i) == 0.0) ? 0.0 : std::pow(f.sigma(i), p);
  }
  return f.u.leftCols(k) * weights.asDiagonal();
}

}  // namespace tuplesim

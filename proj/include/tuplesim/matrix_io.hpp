#pragma once

#include <string>

#include "tuplesim/linalg.hpp"

namespace tuplesim {

// Binary formats, little-endian. Shared header: magic (4 bytes), version u32,
// n_rows u32, n_cols u32, nnz u64. Sparse payload is sorted (row u32, col u32,
// value f64) triplets; dense payload is row-major f64 with nnz = rows * cols.
// A factors file is the U, sigma (1 x r), V dense blocks back to back.

void write_sparse(const std::string& path, const SparseMatrix& m);
SparseMatrix read_sparse(const std::string& path);

void write_dense(const std::string& path, const Matrix& m);
Matrix read_dense(const std::string& path);

void write_factors(const std::string& path, const SvdFactors& f);
SvdFactors read_factors(const std::string& path);

}  // namespace tuplesim

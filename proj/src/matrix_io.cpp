#include "tuplesim/matrix_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "tuplesim/errors.hpp"

namespace tuplesim {

namespace {

constexpr std::array<char, 4> kSparseMagic = {'T', 'S', 'S', 'P'};
constexpr std::array<char, 4> kDenseMagic = {'T', 'S', 'D', 'N'};
constexpr std::uint32_t kFormatVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "matrix files are little-endian; byte swapping is not implemented");

template <typename T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::string& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw data_error("truncated matrix file: " + path);
  return value;
}

struct Header {
  std::uint32_t n_rows = 0;
  std::uint32_t n_cols = 0;
  std::uint64_t nnz = 0;
};

void write_header(std::ofstream& out, const std::array<char, 4>& magic,
                  const Header& h) {
  out.write(magic.data(), magic.size());
  put(out, kFormatVersion);
  put(out, h.n_rows);
  put(out, h.n_cols);
  put(out, h.nnz);
}

Header read_header(std::ifstream& in, const std::array<char, 4>& magic,
                   const std::string& path) {
  std::array<char, 4> seen{};
  in.read(seen.data(), seen.size());
  if (!in || seen != magic) throw data_error("bad matrix file magic: " + path);
  const auto version = get<std::uint32_t>(in, path);
  if (version != kFormatVersion) {
    throw data_error("unsupported matrix file version: " + path);
  }
  Header h;
  h.n_rows = get<std::uint32_t>(in, path);
  h.n_cols = get<std::uint32_t>(in, path);
  h.nnz = get<std::uint64_t>(in, path);
  return h;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write file: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open file: " + path);
  return in;
}

void write_dense_block(std::ofstream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) put(out, m(i, j));
  }
}

Matrix read_dense_block(std::ifstream& in, Eigen::Index rows, Eigen::Index cols,
                        const std::string& path) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = get<double>(in, path);
  }
  return m;
}

}  // namespace

void write_sparse(const std::string& path, const SparseMatrix& m) {
  auto out = open_out(path);
  Header h{static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols()),
           static_cast<std::uint64_t>(m.nonZeros())};
  write_header(out, kSparseMagic, h);
  // Row-major inner iteration emits entries already in (row, col) order.
  for (Eigen::Index outer = 0; outer < m.outerSize(); ++outer) {
    for (SparseMatrix::InnerIterator it(m, outer); it; ++it) {
      put(out, static_cast<std::uint32_t>(it.row()));
      put(out, static_cast<std::uint32_t>(it.col()));
      put(out, it.value());
    }
  }
  if (!out) throw data_error("cannot write file: " + path);
}

SparseMatrix read_sparse(const std::string& path) {
  auto in = open_in(path);
  const Header h = read_header(in, kSparseMagic, path);
  std::vector<Triplet> triplets;
  triplets.reserve(h.nnz);
  for (std::uint64_t i = 0; i < h.nnz; ++i) {
    Triplet t;
    t.row = get<std::uint32_t>(in, path);
    t.col = get<std::uint32_t>(in, path);
    t.value = get<double>(in, path);
    if (t.row >= h.n_rows || t.col >= h.n_cols) {
      throw data_error("sparse entry out of bounds: " + path);
    }
    if (!triplets.empty()) {
      const Triplet& prev = triplets.back();
      if (t.row < prev.row || (t.row == prev.row && t.col <= prev.col)) {
        throw data_error("sparse entries out of order: " + path);
      }
    }
    triplets.push_back(t);
  }
  return make_sparse(h.n_rows, h.n_cols, triplets);
}

void write_dense(const std::string& path, const Matrix& m) {
  auto out = open_out(path);
  Header h{static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols()),
           static_cast<std::uint64_t>(m.size())};
  write_header(out, kDenseMagic, h);
  write_dense_block(out, m);
  if (!out) throw data_error("cannot write file: " + path);
}

Matrix read_dense(const std::string& path) {
  auto in = open_in(path);
  const Header h = read_header(in, kDenseMagic, path);
  if (h.nnz != static_cast<std::uint64_t>(h.n_rows) * h.n_cols) {
    throw data_error("dense header size mismatch: " + path);
  }
  return read_dense_block(in, h.n_rows, h.n_cols, path);
}

void write_factors(const std::string& path, const SvdFactors& f) {
  auto out = open_out(path);
  const auto r = static_cast<std::uint32_t>(f.rank());
  // Header carries the U shape; sigma (1 x r) and V (n_cols x r) follow.
  Header h{static_cast<std::uint32_t>(f.u.rows()), r,
           static_cast<std::uint64_t>(f.u.size() + f.sigma.size() + f.v.size())};
  write_header(out, kDenseMagic, h);
  write_dense_block(out, f.u);
  put(out, static_cast<std::uint32_t>(f.v.rows()));
  for (Eigen::Index i = 0; i < f.sigma.size(); ++i) put(out, f.sigma(i));
  write_dense_block(out, f.v);
  if (!out) throw data_error("cannot write file: " + path);
}

SvdFactors read_factors(const std::string& path) {
  auto in = open_in(path);
  const Header h = read_header(in, kDenseMagic, path);
  SvdFactors f;
  f.u = read_dense_block(in, h.n_rows, h.n_cols, path);
  const auto v_rows = get<std::uint32_t>(in, path);
  f.sigma.resize(h.n_cols);
  for (Eigen::Index i = 0; i < f.sigma.size(); ++i) f.sigma(i) = get<double>(in, path);
  f.v = read_dense_block(in, v_rows, h.n_cols, path);
  const auto expected = static_cast<std::uint64_t>(f.u.size()) +
                        static_cast<std::uint64_t>(f.sigma.size()) +
                        static_cast<std::uint64_t>(f.v.size());
  if (h.nnz != expected) throw data_error("factors header size mismatch: " + path);
  for (Eigen::Index i = 1; i < f.sigma.size(); ++i) {
    if (f.sigma(i) > f.sigma(i - 1)) {
      throw data_error("factors sigma out of order: " + path);
    }
  }
  return f;
}

}  // namespace tuplesim

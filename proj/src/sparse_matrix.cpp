#include "sunbloch/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sunbloch/error.hpp"

namespace sunbloch {

SparseComplexMatrix::SparseComplexMatrix(std::size_t dim) : dim_(dim), row_ptr_(dim + 1, 0) {}

SparseComplexMatrix SparseComplexMatrix::from_triplets(std::size_t dim,
                                                       std::vector<Triplet<Complex>> entries) {
  for (const auto& e : entries) {
    if (e.row >= dim || e.col >= dim) {
      throw DimensionError("matrix entry (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                           ") outside dimension " + std::to_string(dim));
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseComplexMatrix m(dim);
  std::size_t i = 0;
  while (i < entries.size()) {
    const auto row = entries[i].row;
    const auto col = entries[i].col;
    Complex sum = 0.0;
    for (; i < entries.size() && entries[i].row == row && entries[i].col == col; ++i) {
      sum += entries[i].value;
    }
    if (sum != Complex(0.0)) {
      m.col_idx_.push_back(col);
      m.values_.push_back(sum);
      ++m.row_ptr_[row + 1];
    }
  }
  for (std::size_t r = 0; r < dim; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

SparseComplexMatrix SparseComplexMatrix::from_dense(const Eigen::MatrixXcd& dense) {
  if (dense.rows() != dense.cols()) throw DimensionError("dense matrix is not square");
  const auto dim = static_cast<std::size_t>(dense.rows());
  std::vector<Triplet<Complex>> entries;
  for (Eigen::Index r = 0; r < dense.rows(); ++r) {
    for (Eigen::Index c = 0; c < dense.cols(); ++c) {
      if (dense(r, c) != Complex(0.0)) {
        entries.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), dense(r, c)});
      }
    }
  }
  return from_triplets(dim, std::move(entries));
}

SparseComplexMatrix SparseComplexMatrix::identity(std::size_t dim) {
  std::vector<Triplet<Complex>> entries;
  for (std::uint32_t i = 0; i < dim; ++i) entries.push_back({i, i, 1.0});
  return from_triplets(dim, std::move(entries));
}

Complex SparseComplexMatrix::at(std::size_t row, std::size_t col) const {
  if (row >= dim_ || col >= dim_) throw DimensionError("matrix index out of range");
  const auto first = col_idx_.begin() + row_ptr_[row];
  const auto last = col_idx_.begin() + row_ptr_[row + 1];
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(col));
  if (it == last || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

Complex SparseComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) t += at(r, r);
  return t;
}

SparseComplexMatrix SparseComplexMatrix::adjoint() const {
  std::vector<Triplet<Complex>> entries;
  entries.reserve(nnz());
  for_each([&](std::uint32_t r, std::uint32_t c, Complex v) { entries.push_back({c, r, std::conj(v)}); });
  return from_triplets(dim_, std::move(entries));
}

SparseComplexMatrix SparseComplexMatrix::scaled(Complex factor) const {
  std::vector<Triplet<Complex>> entries;
  entries.reserve(nnz());
  for_each([&](std::uint32_t r, std::uint32_t c, Complex v) { entries.push_back({r, c, v * factor}); });
  return from_triplets(dim_, std::move(entries));
}

Eigen::MatrixXcd SparseComplexMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n, n);
  for_each([&](std::uint32_t r, std::uint32_t c, Complex v) { dense(r, c) = v; });
  return dense;
}

double SparseComplexMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for_each([&](std::uint32_t r, std::uint32_t c, Complex v) {
    worst = std::max(worst, std::abs(v - std::conj(at(c, r))));
  });
  return worst;
}

SparseComplexMatrix operator*(const SparseComplexMatrix& a, const SparseComplexMatrix& b) {
  if (a.dim_ != b.dim_) throw DimensionError("matrix product dimension mismatch");
  std::vector<Triplet<Complex>> entries;
  a.for_each([&](std::uint32_t r, std::uint32_t k, Complex av) {
    for (std::uint32_t p = b.row_ptr_[k]; p < b.row_ptr_[k + 1]; ++p) {
      entries.push_back({r, b.col_idx_[p], av * b.values_[p]});
    }
  });
  return SparseComplexMatrix::from_triplets(a.dim_, std::move(entries));
}

SparseComplexMatrix operator+(const SparseComplexMatrix& a, const SparseComplexMatrix& b) {
  if (a.dim_ != b.dim_) throw DimensionError("matrix sum dimension mismatch");
  std::vector<Triplet<Complex>> entries;
  entries.reserve(a.nnz() + b.nnz());
  a.for_each([&](std::uint32_t r, std::uint32_t c, Complex v) { entries.push_back({r, c, v}); });
  b.for_each([&](std::uint32_t r, std::uint32_t c, Complex v) { entries.push_back({r, c, v}); });
  return SparseComplexMatrix::from_triplets(a.dim_, std::move(entries));
}

SparseComplexMatrix operator-(const SparseComplexMatrix& a, const SparseComplexMatrix& b) {
  return a + b.scaled(-1.0);
}

Complex trace_of_product(const SparseComplexMatrix& a, const SparseComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("trace product dimension mismatch");
  Complex t = 0.0;
  a.for_each([&](std::uint32_t r, std::uint32_t c, Complex v) { t += v * b.at(c, r); });
  return t;
}

RealCsrMatrix RealCsrMatrix::zero(std::size_t rows, std::size_t cols) {
  RealCsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(rows + 1, 0);
  return m;
}

double RealCsrMatrix::at(std::size_t row, std::size_t col) const {
  const auto first = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[row]);
  const auto last = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[row + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(col));
  if (it == last || *it != col) return 0.0;
  return values[static_cast<std::size_t>(it - col_idx.begin())];
}

void RealCsrMatrix::multiply_add(std::span<const double> x, std::span<double> y, double alpha) const {
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (auto k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += values[k] * x[col_idx[k]];
    y[r] += alpha * acc;
  }
}

RealCsrMatrix RealCsrMatrix::transposed() const {
  RealCsrMatrix t = zero(cols, rows);
  for (auto c : col_idx) ++t.row_ptr[c + 1];
  for (std::size_t r = 0; r < t.rows; ++r) t.row_ptr[r + 1] += t.row_ptr[r];
  t.col_idx.resize(nnz());
  t.values.resize(nnz());
  std::vector<std::uint64_t> cursor(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (std::size_t r = 0; r < rows; ++r) {
    for (auto k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      const auto dst = cursor[col_idx[k]]++;
      t.col_idx[dst] = static_cast<std::uint32_t>(r);
      t.values[dst] = values[k];
    }
  }
  return t;
}

Eigen::MatrixXd RealCsrMatrix::to_dense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (auto k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      dense(static_cast<Eigen::Index>(r), col_idx[k]) = values[k];
    }
  }
  return dense;
}

RealCsrMatrix add(const RealCsrMatrix& a, const RealCsrMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw DimensionError("matrix sum shape mismatch");
  RealCsrMatrix out = RealCsrMatrix::zero(a.rows, a.cols);
  out.col_idx.reserve(a.nnz() + b.nnz());
  out.values.reserve(a.nnz() + b.nnz());
  for (std::size_t r = 0; r < a.rows; ++r) {
    auto i = a.row_ptr[r];
    auto j = b.row_ptr[r];
    const auto ie = a.row_ptr[r + 1];
    const auto je = b.row_ptr[r + 1];
    while (i < ie || j < je) {
      std::uint32_t col;
      double v;
      if (j >= je || (i < ie && a.col_idx[i] < b.col_idx[j])) {
        col = a.col_idx[i];
        v = a.values[i++];
      } else if (i >= ie || b.col_idx[j] < a.col_idx[i]) {
        col = b.col_idx[j];
        v = b.values[j++];
      } else {
        col = a.col_idx[i];
        v = a.values[i++] + b.values[j++];
      }
      if (v != 0.0) {
        out.col_idx.push_back(col);
        out.values.push_back(v);
      }
    }
    out.row_ptr[r + 1] = out.values.size();
  }
  return out;
}

}  // namespace sunbloch

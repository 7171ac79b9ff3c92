#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sunbloch {

using Complex = std::complex<double>;

template <typename T>
struct Triplet {
  std::uint32_t row;
  std::uint32_t col;
  T value;
};

/// Square complex matrix in compressed-row layout. Entries are sorted by
/// (row, col), unique, and never exactly zero.
class SparseComplexMatrix {
 public:
  SparseComplexMatrix() = default;
  explicit SparseComplexMatrix(std::size_t dim);

  /// Duplicate coordinates are summed; exact zeros are dropped.
  static SparseComplexMatrix from_triplets(std::size_t dim, std::vector<Triplet<Complex>> entries);
  static SparseComplexMatrix from_dense(const Eigen::MatrixXcd& dense);
  static SparseComplexMatrix identity(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::uint32_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::uint32_t> col_idx() const noexcept { return col_idx_; }
  std::span<const Complex> values() const noexcept { return values_; }

  /// Element lookup, O(log nnz(row)).
  Complex at(std::size_t row, std::size_t col) const;

  Complex trace() const;
  SparseComplexMatrix adjoint() const;
  SparseComplexMatrix scaled(Complex factor) const;
  Eigen::MatrixXcd to_dense() const;

  /// max |A - A^dagger| over all entries.
  double hermiticity_defect() const;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::uint32_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
        fn(static_cast<std::uint32_t>(r), col_idx_[k], values_[k]);
      }
    }
  }

  friend SparseComplexMatrix operator*(const SparseComplexMatrix& a, const SparseComplexMatrix& b);
  friend SparseComplexMatrix operator+(const SparseComplexMatrix& a, const SparseComplexMatrix& b);
  friend SparseComplexMatrix operator-(const SparseComplexMatrix& a, const SparseComplexMatrix& b);
  friend bool operator==(const SparseComplexMatrix&, const SparseComplexMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::uint32_t> row_ptr_{0};
  std::vector<std::uint32_t> col_idx_;
  std::vector<Complex> values_;
};

/// Tr(A B) without forming the product.
Complex trace_of_product(const SparseComplexMatrix& a, const SparseComplexMatrix& b);

/// Real compressed-row matrix used for the assembled ODE operators.
struct RealCsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint64_t> row_ptr{0};
  std::vector<std::uint32_t> col_idx;
  std::vector<double> values;

  static RealCsrMatrix zero(std::size_t rows, std::size_t cols);

  std::size_t nnz() const noexcept { return values.size(); }
  double at(std::size_t row, std::size_t col) const;

  /// y += alpha * A x
  void multiply_add(std::span<const double> x, std::span<double> y, double alpha = 1.0) const;

  RealCsrMatrix transposed() const;
  Eigen::MatrixXd to_dense() const;

  friend bool operator==(const RealCsrMatrix&, const RealCsrMatrix&) = default;
};

/// Entrywise sum of two matrices of equal shape; exact zeros are dropped.
RealCsrMatrix add(const RealCsrMatrix& a, const RealCsrMatrix& b);

}  // namespace sunbloch

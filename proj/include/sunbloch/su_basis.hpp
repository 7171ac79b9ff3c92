#pragma once

// Orthonormal traceless Hermitian generator basis of SU(N).
//
// Generators are indexed 0..M-1 with M = N^2 - 1 in a fixed order: the
// symmetric block S(j,k), then the antisymmetric block J(j,k), both in
// lexicographic (j,k) order with 0 <= j < k < N, then the diagonal block
// D(l) for l = 1..N-1. Matrix rows/columns are 0-based.
//
//   S(j,k) = (E_jk + E_kj) / sqrt(2)
//   J(j,k) = -i (E_jk - E_kj) / sqrt(2)
//   D(l)   = (E_00 + ... + E_{l-1,l-1} - l E_ll) / sqrt(l (l+1))
//
// With this normalisation Tr(F_i F_k) = delta_ik.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sunbloch/error.hpp"
#include "sunbloch/sparse_matrix.hpp"

namespace sunbloch {

enum class GeneratorKind : std::uint8_t { kSym, kAntisym, kDiag };

struct GeneratorId {
  GeneratorKind kind = GeneratorKind::kSym;
  std::uint32_t j = 0;  // row of the upper matrix unit, or l for kDiag
  std::uint32_t k = 0;  // column of the upper matrix unit, unused for kDiag

  static GeneratorId sym(std::uint32_t j, std::uint32_t k) { return {GeneratorKind::kSym, j, k}; }
  static GeneratorId antisym(std::uint32_t j, std::uint32_t k) { return {GeneratorKind::kAntisym, j, k}; }
  static GeneratorId diag(std::uint32_t l) { return {GeneratorKind::kDiag, l, 0}; }

  friend bool operator==(const GeneratorId&, const GeneratorId&) = default;
};

class GeneratorBasis {
 public:
  explicit GeneratorBasis(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return n_ * n_ - 1; }
  std::size_t pair_count() const noexcept { return pairs_; }

  std::uint32_t index_of(const GeneratorId& id) const;
  GeneratorId id_of(std::uint32_t index) const;

  // Fast-path helpers for the structure-constant kernels. No bounds checks.
  std::uint32_t pair_index(std::uint32_t a, std::uint32_t b) const noexcept {
    return static_cast<std::uint32_t>(std::uint64_t{a} * (2 * n_ - a - 1) / 2 + (b - a - 1));
  }
  std::uint32_t sym_index(std::uint32_t a, std::uint32_t b) const noexcept { return pair_index(a, b); }
  std::uint32_t antisym_index(std::uint32_t a, std::uint32_t b) const noexcept {
    return static_cast<std::uint32_t>(pairs_) + pair_index(a, b);
  }
  std::uint32_t diag_index(std::uint32_t l) const noexcept {
    return static_cast<std::uint32_t>(2 * pairs_) + l - 1;
  }
  GeneratorKind kind_of(std::uint32_t index) const noexcept {
    if (index < pairs_) return GeneratorKind::kSym;
    if (index < 2 * pairs_) return GeneratorKind::kAntisym;
    return GeneratorKind::kDiag;
  }
  std::uint32_t pair_row(std::uint32_t p) const noexcept { return pair_a_[p]; }
  std::uint32_t pair_col(std::uint32_t p) const noexcept { return pair_b_[p]; }

  /// 1/sqrt(l(l+1)).
  static double diag_scale(std::uint32_t l) noexcept;
  /// Diagonal entry x of D(l).
  static double diag_entry(std::uint32_t l, std::uint32_t x) noexcept {
    if (x < l) return diag_scale(l);
    if (x == l) return -static_cast<double>(l) * diag_scale(l);
    return 0.0;
  }

  SparseComplexMatrix generator_matrix(const GeneratorId& id) const;
  SparseComplexMatrix generator_matrix(std::uint32_t index) const { return generator_matrix(id_of(index)); }

 private:
  void check_id(const GeneratorId& id) const;

  std::size_t n_;
  std::size_t pairs_;
  std::vector<std::uint32_t> pair_a_;
  std::vector<std::uint32_t> pair_b_;
};

/// Sparse coefficient vector over the generator basis, stored as a value
/// array plus a dense slot array holding -1 for zero coefficients, so a zero
/// check or lookup is O(1).
template <typename T>
class CoefficientList {
 public:
  CoefficientList() = default;

  /// Duplicate indices are summed in input order; exact zeros are dropped.
  CoefficientList(std::size_t m, std::vector<std::pair<std::uint32_t, T>> entries) : slot_(m, -1) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t i = 0;
    while (i < entries.size()) {
      const auto s = entries[i].first;
      if (s >= m) throw DimensionError("coefficient index out of range");
      T sum{};
      for (; i < entries.size() && entries[i].first == s; ++i) sum += entries[i].second;
      if (sum != T{}) {
        slot_[s] = static_cast<std::int64_t>(values_.size());
        indices_.push_back(s);
        values_.push_back(sum);
      }
    }
  }

  std::size_t size() const noexcept { return slot_.size(); }
  std::size_t nnz() const noexcept { return values_.size(); }
  bool is_zero(std::uint32_t s) const noexcept { return slot_[s] < 0; }
  T operator[](std::uint32_t s) const noexcept { return slot_[s] < 0 ? T{} : values_[static_cast<std::size_t>(slot_[s])]; }

  /// Nonzero indices in ascending order, with matching values.
  std::span<const std::uint32_t> indices() const noexcept { return indices_; }
  std::span<const T> values() const noexcept { return values_; }

  std::vector<T> to_dense() const {
    std::vector<T> dense(slot_.size(), T{});
    for (std::size_t i = 0; i < indices_.size(); ++i) dense[indices_[i]] = values_[i];
    return dense;
  }

 private:
  std::vector<std::int64_t> slot_;
  std::vector<std::uint32_t> indices_;
  std::vector<T> values_;
};

using RealCoefficients = CoefficientList<double>;
using ComplexCoefficients = CoefficientList<Complex>;

/// a_s = Tr(F_s A) for Hermitian A. The identity component Tr(A)/N is not
/// part of the result. Runs in O(nnz(A) + N); output is real by construction.
RealCoefficients expand_hermitian(const GeneratorBasis& basis, const SparseComplexMatrix& a,
                                  double tolerance = 1e-12);

/// l_s = Tr(F_s A) for a traceless, not necessarily Hermitian, A.
/// Throws ValidationError (reporting the trace) when |Tr A| > trace_tolerance.
ComplexCoefficients expand_general(const GeneratorBasis& basis, const SparseComplexMatrix& a,
                                   double trace_tolerance = 1e-10);

/// Tr(F_s A) for a dense Hermitian A, s = 0..M-1.
std::vector<double> project_hermitian(const GeneratorBasis& basis, const Eigen::MatrixXcd& a);

/// rho = I/N + sum_s v_s F_s.
Eigen::MatrixXcd reconstruct_density(const GeneratorBasis& basis, std::span<const double> v);

}  // namespace sunbloch

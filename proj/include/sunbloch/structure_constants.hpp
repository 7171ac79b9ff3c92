#pragma once

// SU(N) structure constants
//
//   f_mns = -i Tr(F_s [F_m, F_n])      (totally antisymmetric)
//   d_mns =    Tr(F_s {F_m, F_n})      (totally symmetric)
//   z_mns = d_mns + i f_mns = 2 Tr(F_m F_n F_s)
//
// so that F_m F_n = delta_mn I / N + (1/2) sum_s z_mns F_s.
//
// Every S/J generator touches two matrix units and every D is diagonal, so
// a triple can only be nonzero in three index patterns:
//   * three off-diagonal generators on the edges of a triangle (a,b,c),
//   * two off-diagonal generators on the same pair (a,b) and a D(l) with
//     l >= max(1, a),
//   * three diagonal generators {D(p), D(p), D(q)} with q > p, or
//     {D(p), D(p), D(p)} with p >= 2.
// Each value follows from a constant number of matrix-unit products.

#include <complex>
#include <cstdint>
#include <vector>

#include "sunbloch/sparse_tensor.hpp"
#include "sunbloch/su_basis.hpp"

namespace sunbloch {

/// Closed-form nonzero counts of f and d.
constexpr std::uint64_t nz_f_count(std::uint64_t n) { return 5 * n * n * n + 6 - 9 * n * n - 2 * n; }
constexpr std::uint64_t nz_d_count(std::uint64_t n) { return 6 * n * n * n + 1 - n * (21 * n + 7) / 2; }

/// z_mns in O(1). Values are computed on the sorted index triple and then
/// permuted, so f is exactly antisymmetric and d exactly symmetric.
Complex z_entry(const GeneratorBasis& basis, std::uint32_t m, std::uint32_t n, std::uint32_t s);
inline double f_entry(const GeneratorBasis& basis, std::uint32_t m, std::uint32_t n, std::uint32_t s) {
  return z_entry(basis, m, n, s).imag();
}
inline double d_entry(const GeneratorBasis& basis, std::uint32_t m, std::uint32_t n, std::uint32_t s) {
  return z_entry(basis, m, n, s).real();
}

/// Analytic enumeration of all nonzero f_mns, sorted by (m, n, s).
RealTensor3 f_nonzeros(std::size_t n);
/// Analytic enumeration of all nonzero d_mns, sorted by (m, n, s).
RealTensor3 d_nonzeros(std::size_t n);
/// Z = F + D, merged with a comparison sort on (m, n, s).
ComplexTensor3 z_nonzeros(const RealTensor3& f, const RealTensor3& d);

struct SliceEntry {
  std::uint32_t n;
  std::uint32_t s;
  Complex z;
};

/// All (n, s) with z_mns != 0 for a fixed first index m, sorted by (n, s).
/// O(N) work for off-diagonal m and O(N^2) for diagonal m.
void z_slice(const GeneratorBasis& basis, std::uint32_t m, std::vector<SliceEntry>& out);

/// Trace-formula oracles evaluated with explicit sparse matrix products.
double brute_force_f(const GeneratorBasis& basis, std::uint32_t m, std::uint32_t n, std::uint32_t s);
double brute_force_d(const GeneratorBasis& basis, std::uint32_t m, std::uint32_t n, std::uint32_t s);

/// Gives the compile pipelines access to f and z by first-index slice,
/// either from materialized tensors or generated on the fly.
class TensorSource {
 public:
  static TensorSource on_the_fly(std::size_t n);
  static TensorSource materialize(std::size_t n);
  /// f and z must be sorted by (m, n, s) and belong to the same N.
  static TensorSource from_tensors(RealTensor3 f, ComplexTensor3 z);

  std::size_t n() const noexcept { return basis_.n(); }
  const GeneratorBasis& basis() const noexcept { return basis_; }
  bool materialized() const noexcept { return materialized_; }
  const RealTensor3& f() const noexcept { return f_; }
  const ComplexTensor3& z() const noexcept { return z_; }

  /// fn(n, s, f_mns) over nonzero f in slice m, ascending (n, s).
  template <typename Fn>
  void for_each_f(std::uint32_t m, Fn&& fn) const {
    if (materialized_) {
      for (auto k = f_offsets_[m]; k < f_offsets_[m + 1]; ++k) fn(f_.entries[k].n, f_.entries[k].s, f_.entries[k].value);
      return;
    }
    thread_local std::vector<SliceEntry> scratch;
    z_slice(basis_, m, scratch);
    for (const auto& e : scratch) {
      if (e.z.imag() != 0.0) fn(e.n, e.s, e.z.imag());
    }
  }

  /// fn(n, s, z_mns) over nonzero z in slice m, ascending (n, s).
  template <typename Fn>
  void for_each_z(std::uint32_t m, Fn&& fn) const {
    if (materialized_) {
      for (auto k = z_offsets_[m]; k < z_offsets_[m + 1]; ++k) fn(z_.entries[k].n, z_.entries[k].s, z_.entries[k].value);
      return;
    }
    thread_local std::vector<SliceEntry> scratch;
    z_slice(basis_, m, scratch);
    for (const auto& e : scratch) fn(e.n, e.s, e.z);
  }

  /// Number of nonzero f in slice m.
  std::size_t f_slice_size(std::uint32_t m) const;
  std::size_t z_slice_size(std::uint32_t m) const;

 private:
  explicit TensorSource(std::size_t n) : basis_(n) {}

  GeneratorBasis basis_;
  bool materialized_ = false;
  RealTensor3 f_;
  ComplexTensor3 z_;
  std::vector<std::size_t> f_offsets_;
  std::vector<std::size_t> z_offsets_;
};

}  // namespace sunbloch

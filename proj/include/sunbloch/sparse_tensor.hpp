#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace sunbloch {

enum class TensorTag : char { kF = 'f', kD = 'd', kZ = 'z' };

/// Entry ordering of a SparseTensor3. kByMns is full lexicographic order.
enum class TensorLayout : std::uint8_t { kUnsorted, kByMns, kBySm, kByNs };

template <typename T>
struct TensorEntry {
  std::uint32_t m;
  std::uint32_t n;
  std::uint32_t s;
  T value;

  friend bool operator==(const TensorEntry&, const TensorEntry&) = default;
};

/// Rank-3 sparse tensor over generator indices 0..M-1 in coordinate form.
template <typename T>
struct SparseTensor3 {
  std::size_t n = 0;  // SU(N) dimension; each axis has M = N^2 - 1 slots
  TensorTag tag = TensorTag::kF;
  TensorLayout layout = TensorLayout::kUnsorted;
  std::vector<TensorEntry<T>> entries;

  std::size_t axis() const noexcept { return n * n - 1; }
  std::size_t nnz() const noexcept { return entries.size(); }

  friend bool operator==(const SparseTensor3&, const SparseTensor3&) = default;
};

using RealTensor3 = SparseTensor3<double>;
using ComplexTensor3 = SparseTensor3<std::complex<double>>;

namespace detail {

/// Stable counting sort of `entries` by key(entry) in [0, buckets).
template <typename T, typename Key>
void counting_sort(std::vector<TensorEntry<T>>& entries, std::size_t buckets, Key key) {
  std::vector<std::size_t> offsets(buckets + 1, 0);
  for (const auto& e : entries) ++offsets[key(e) + 1];
  for (std::size_t b = 0; b < buckets; ++b) offsets[b + 1] += offsets[b];
  std::vector<TensorEntry<T>> out(entries.size());
  for (const auto& e : entries) out[offsets[key(e)]++] = e;
  entries.swap(out);
}

}  // namespace detail

/// Reorders entries by the requested layout with LSD counting sorts:
/// O(NZ + M) per pass, stable, so ties keep their incoming order.
template <typename T>
SparseTensor3<T> sort_entries(SparseTensor3<T> t, TensorLayout key) {
  const auto m = t.axis();
  auto& e = t.entries;
  switch (key) {
    case TensorLayout::kUnsorted:
      break;
    case TensorLayout::kByMns:
      detail::counting_sort(e, m, [](const auto& x) { return x.s; });
      detail::counting_sort(e, m, [](const auto& x) { return x.n; });
      detail::counting_sort(e, m, [](const auto& x) { return x.m; });
      break;
    case TensorLayout::kBySm:
      detail::counting_sort(e, m, [](const auto& x) { return x.m; });
      detail::counting_sort(e, m, [](const auto& x) { return x.s; });
      break;
    case TensorLayout::kByNs:
      detail::counting_sort(e, m, [](const auto& x) { return x.s; });
      detail::counting_sort(e, m, [](const auto& x) { return x.n; });
      break;
  }
  t.layout = key;
  return t;
}

/// Offsets of each first-index slice in a kByMns tensor: entries with m == k
/// occupy [offsets[k], offsets[k+1]).
template <typename T>
std::vector<std::size_t> first_index_offsets(const SparseTensor3<T>& t) {
  std::vector<std::size_t> offsets(t.axis() + 1, 0);
  for (const auto& e : t.entries) ++offsets[e.m + 1];
  for (std::size_t k = 0; k + 1 < offsets.size(); ++k) offsets[k + 1] += offsets[k];
  return offsets;
}

}  // namespace sunbloch

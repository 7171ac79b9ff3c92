#include "sunbloch/structure_constants.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace sunbloch {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

struct MatrixUnit {
  std::uint32_t row;
  std::uint32_t col;
  Complex coef;
};

// The two matrix units of an off-diagonal generator.
std::array<MatrixUnit, 2> offdiag_units(const GeneratorBasis& basis, std::uint32_t index) {
  const bool sym = basis.kind_of(index) == GeneratorKind::kSym;
  const auto p = sym ? index : index - static_cast<std::uint32_t>(basis.pair_count());
  const auto a = basis.pair_row(p);
  const auto b = basis.pair_col(p);
  if (sym) return {{{a, b, kInvSqrt2}, {b, a, kInvSqrt2}}};
  return {{{a, b, Complex(0.0, -kInvSqrt2)}, {b, a, Complex(0.0, kInvSqrt2)}}};
}

std::uint32_t diag_l(const GeneratorBasis& basis, std::uint32_t index) {
  return index - 2 * static_cast<std::uint32_t>(basis.pair_count()) + 1;
}

// Tr(D(p) D(q) D(r)).
double diag_triple_trace(std::uint32_t p, std::uint32_t q, std::uint32_t r) {
  std::array<std::uint32_t, 3> l{p, q, r};
  std::sort(l.begin(), l.end());
  if (l[0] != l[1]) return 0.0;
  if (l[1] != l[2]) return GeneratorBasis::diag_scale(l[2]);
  const double c = GeneratorBasis::diag_scale(l[0]);
  const double ld = static_cast<double>(l[0]);
  return ld * (1.0 - ld * ld) * c * c * c;
}

// Tr(F_x F_y F_z) for the given order.
Complex triple_trace(const GeneratorBasis& basis, std::uint32_t x, std::uint32_t y, std::uint32_t z) {
  const bool dx = basis.kind_of(x) == GeneratorKind::kDiag;
  const bool dy = basis.kind_of(y) == GeneratorKind::kDiag;
  const bool dz = basis.kind_of(z) == GeneratorKind::kDiag;
  const int diag_count = int{dx} + int{dy} + int{dz};

  if (diag_count == 3) return diag_triple_trace(diag_l(basis, x), diag_l(basis, y), diag_l(basis, z));
  if (diag_count == 2) return 0.0;

  if (diag_count == 1) {
    // Rotate cyclically so the diagonal generator is last: Tr(X Y D).
    std::uint32_t gx = x, gy = y, gd = z;
    if (dx) {
      gx = y;
      gy = z;
      gd = x;
    } else if (dy) {
      gx = z;
      gy = x;
      gd = y;
    }
    const auto ux = offdiag_units(basis, gx);
    const auto uy = offdiag_units(basis, gy);
    if (ux[0].row != uy[0].row || ux[0].col != uy[0].col) return 0.0;
    const auto l = diag_l(basis, gd);
    const auto a = ux[0].row;
    const auto b = ux[0].col;
    // (XY)_aa = X_ab Y_ba, (XY)_bb = X_ba Y_ab.
    return ux[0].coef * uy[1].coef * GeneratorBasis::diag_entry(l, a) +
           ux[1].coef * uy[0].coef * GeneratorBasis::diag_entry(l, b);
  }

  const auto ux = offdiag_units(basis, x);
  const auto uy = offdiag_units(basis, y);
  const auto uz = offdiag_units(basis, z);
  Complex t = 0.0;
  for (const auto& p : ux) {
    for (const auto& q : uy) {
      if (p.col != q.row) continue;
      for (const auto& r : uz) {
        if (q.col == r.row && r.col == p.row) t += p.coef * q.coef * r.coef;
      }
    }
  }
  return t;
}

template <typename Emit>
void emit_permutations(const GeneratorBasis& basis, std::array<std::uint32_t, 3> g, Emit& emit) {
  std::sort(g.begin(), g.end());
  do {
    emit(g[0], g[1], g[2], z_entry(basis, g[0], g[1], g[2]));
  } while (std::next_permutation(g.begin(), g.end()));
}

// Visits every structurally possible index triple once (all distinct
// permutations of each candidate multiset) with its z value.
template <typename Emit>
void enumerate_all(const GeneratorBasis& basis, Emit&& emit) {
  const auto n = static_cast<std::uint32_t>(basis.n());
  const auto gen = [&](std::uint32_t a, std::uint32_t b, bool anti) {
    return anti ? basis.antisym_index(a, b) : basis.sym_index(a, b);
  };

  // Triangles.
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      for (std::uint32_t c = b + 1; c < n; ++c) {
        for (int kinds = 0; kinds < 8; ++kinds) {
          emit_permutations(basis, {gen(a, b, kinds & 1), gen(b, c, kinds & 2), gen(a, c, kinds & 4)}, emit);
        }
      }
    }
  }
  // Same pair plus a diagonal generator.
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      const auto s = gen(a, b, false);
      const auto j = gen(a, b, true);
      for (std::uint32_t l = std::max(1u, a); l < n; ++l) {
        const auto d = basis.diag_index(l);
        emit_permutations(basis, {s, s, d}, emit);
        emit_permutations(basis, {s, j, d}, emit);
        emit_permutations(basis, {j, j, d}, emit);
      }
    }
  }
  // Three diagonal generators.
  for (std::uint32_t p = 1; p < n; ++p) {
    const auto dp = basis.diag_index(p);
    for (std::uint32_t q = p + 1; q < n; ++q) emit_permutations(basis, {dp, dp, basis.diag_index(q)}, emit);
    if (p >= 2) emit_permutations(basis, {dp, dp, dp}, emit);
  }
}

RealTensor3 enumerate_part(std::size_t n, TensorTag tag) {
  const GeneratorBasis basis(n);
  RealTensor3 t;
  t.n = n;
  t.tag = tag;
  t.entries.reserve(tag == TensorTag::kF ? nz_f_count(n) : nz_d_count(n));
  enumerate_all(basis, [&](std::uint32_t m, std::uint32_t nn, std::uint32_t s, Complex z) {
    const double v = tag == TensorTag::kF ? z.imag() : z.real();
    if (v != 0.0) t.entries.push_back({m, nn, s, v});
  });
  return sort_entries(std::move(t), TensorLayout::kByMns);
}

}  // namespace

Complex z_entry(const GeneratorBasis& basis, std::uint32_t m, std::uint32_t n, std::uint32_t s) {
  // Sort the triple, tracking the permutation parity.
  std::uint32_t i = m, j = n, k = s;
  bool odd = false;
  if (i > j) std::swap(i, j), odd = !odd;
  if (j > k) std::swap(j, k), odd = !odd;
  if (i > j) std::swap(i, j), odd = !odd;

  Complex z = 2.0 * triple_trace(basis, i, j, k);
  if (i == j || j == k) return {z.real(), 0.0};
  return odd ? std::conj(z) : z;
}

RealTensor3 f_nonzeros(std::size_t n) { return enumerate_part(n, TensorTag::kF); }

RealTensor3 d_nonzeros(std::size_t n) { return enumerate_part(n, TensorTag::kD); }

ComplexTensor3 z_nonzeros(const RealTensor3& f, const RealTensor3& d) {
  ComplexTensor3 z;
  z.n = f.n;
  z.tag = TensorTag::kZ;
  std::vector<TensorEntry<Complex>> all;
  all.reserve(f.nnz() + d.nnz());
  for (const auto& e : f.entries) all.push_back({e.m, e.n, e.s, Complex(0.0, e.value)});
  for (const auto& e : d.entries) all.push_back({e.m, e.n, e.s, Complex(e.value, 0.0)});
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.m != b.m) return a.m < b.m;
    if (a.n != b.n) return a.n < b.n;
    return a.s < b.s;
  });
  z.entries.reserve(all.size());
  for (const auto& e : all) {
    if (!z.entries.empty()) {
      auto& last = z.entries.back();
      if (last.m == e.m && last.n == e.n && last.s == e.s) {
        last.value += e.value;
        continue;
      }
    }
    z.entries.push_back(e);
  }
  z.layout = TensorLayout::kByMns;
  return z;
}

void z_slice(const GeneratorBasis& basis, std::uint32_t m, std::vector<SliceEntry>& out) {
  out.clear();
  const auto n = static_cast<std::uint32_t>(basis.n());
  const auto pairs = static_cast<std::uint32_t>(basis.pair_count());
  const auto push = [&](std::uint32_t nn, std::uint32_t s) {
    const Complex z = z_entry(basis, m, nn, s);
    if (z != Complex(0.0)) out.push_back({nn, s, z});
  };

  if (basis.kind_of(m) != GeneratorKind::kDiag) {
    const auto p = m < pairs ? m : m - pairs;
    const auto a = basis.pair_row(p);
    const auto b = basis.pair_col(p);
    for (std::uint32_t c = 0; c < n; ++c) {
      if (c == a || c == b) continue;
      const auto e1 = basis.pair_index(std::min(a, c), std::max(a, c));
      const auto e2 = basis.pair_index(std::min(b, c), std::max(b, c));
      for (const auto g1 : {e1, e1 + pairs}) {
        for (const auto g2 : {e2, e2 + pairs}) {
          push(g1, g2);
          push(g2, g1);
        }
      }
    }
    for (const auto y : {p, p + pairs}) {
      for (std::uint32_t l = std::max(1u, a); l < n; ++l) {
        const auto d = basis.diag_index(l);
        push(y, d);
        push(d, y);
      }
    }
  } else {
    const auto l = m - 2 * pairs + 1;
    for (std::uint32_t a = 0; a <= l; ++a) {
      for (std::uint32_t b = a + 1; b < n; ++b) {
        const auto q = basis.pair_index(a, b);
        push(q, q);
        push(q, q + pairs);
        push(q + pairs, q);
        push(q + pairs, q + pairs);
      }
    }
    for (std::uint32_t q = l + 1; q < n; ++q) {
      push(m, basis.diag_index(q));
      push(basis.diag_index(q), m);
    }
    for (std::uint32_t p = 1; p < l; ++p) push(basis.diag_index(p), basis.diag_index(p));
    if (l >= 2) push(m, m);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.n != y.n ? x.n < y.n : x.s < y.s; });
}

double brute_force_f(const GeneratorBasis& basis, std::uint32_t m, std::uint32_t n, std::uint32_t s) {
  const auto fm = basis.generator_matrix(m);
  const auto fn = basis.generator_matrix(n);
  const auto fs = basis.generator_matrix(s);
  const Complex commutator_trace = trace_of_product(fs, fm * fn - fn * fm);
  return (Complex(0.0, -1.0) * commutator_trace).real();
}

double brute_force_d(const GeneratorBasis& basis, std::uint32_t m, std::uint32_t n, std::uint32_t s) {
  const auto fm = basis.generator_matrix(m);
  const auto fn = basis.generator_matrix(n);
  const auto fs = basis.generator_matrix(s);
  return trace_of_product(fs, fm * fn + fn * fm).real();
}

TensorSource TensorSource::on_the_fly(std::size_t n) { return TensorSource(n); }

TensorSource TensorSource::materialize(std::size_t n) {
  auto f = f_nonzeros(n);
  auto z = z_nonzeros(f, d_nonzeros(n));
  return from_tensors(std::move(f), std::move(z));
}

TensorSource TensorSource::from_tensors(RealTensor3 f, ComplexTensor3 z) {
  if (f.n != z.n) throw DimensionError("f and z tensors belong to different N");
  if (f.layout != TensorLayout::kByMns || z.layout != TensorLayout::kByMns) {
    throw DimensionError("tensors must be sorted by (m, n, s)");
  }
  TensorSource src(f.n);
  src.materialized_ = true;
  src.f_offsets_ = first_index_offsets(f);
  src.z_offsets_ = first_index_offsets(z);
  src.f_ = std::move(f);
  src.z_ = std::move(z);
  return src;
}

std::size_t TensorSource::f_slice_size(std::uint32_t m) const {
  if (materialized_) return f_offsets_[m + 1] - f_offsets_[m];
  std::size_t count = 0;
  for_each_f(m, [&](std::uint32_t, std::uint32_t, double) { ++count; });
  return count;
}

std::size_t TensorSource::z_slice_size(std::uint32_t m) const {
  if (materialized_) return z_offsets_[m + 1] - z_offsets_[m];
  std::size_t count = 0;
  for_each_z(m, [&](std::uint32_t, std::uint32_t, Complex) { ++count; });
  return count;
}

}  // namespace sunbloch

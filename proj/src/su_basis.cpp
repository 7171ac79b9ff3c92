#include "sunbloch/su_basis.hpp"

#include <cmath>
#include <string>

namespace sunbloch {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrt2 = 1.41421356237309504880;

}  // namespace

GeneratorBasis::GeneratorBasis(std::size_t n) : n_(n), pairs_(n * (n - 1) / 2) {
  if (n < 2) throw DimensionError("basis dimension must be at least 2, got " + std::to_string(n));
  pair_a_.reserve(pairs_);
  pair_b_.reserve(pairs_);
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      pair_a_.push_back(a);
      pair_b_.push_back(b);
    }
  }
}

double GeneratorBasis::diag_scale(std::uint32_t l) noexcept {
  const double ld = static_cast<double>(l);
  return 1.0 / std::sqrt(ld * (ld + 1.0));
}

void GeneratorBasis::check_id(const GeneratorId& id) const {
  if (id.kind == GeneratorKind::kDiag) {
    if (id.j < 1 || id.j >= n_) {
      throw DimensionError("diagonal generator D(" + std::to_string(id.j) + ") outside 1.." +
                           std::to_string(n_ - 1));
    }
    return;
  }
  if (id.j >= id.k || id.k >= n_) {
    throw DimensionError("off-diagonal generator (" + std::to_string(id.j) + "," + std::to_string(id.k) +
                         ") requires j < k < " + std::to_string(n_));
  }
}

std::uint32_t GeneratorBasis::index_of(const GeneratorId& id) const {
  check_id(id);
  switch (id.kind) {
    case GeneratorKind::kSym:
      return sym_index(id.j, id.k);
    case GeneratorKind::kAntisym:
      return antisym_index(id.j, id.k);
    case GeneratorKind::kDiag:
      return diag_index(id.j);
  }
  return 0;
}

GeneratorId GeneratorBasis::id_of(std::uint32_t index) const {
  if (index >= m()) {
    throw DimensionError("generator index " + std::to_string(index) + " outside 0.." + std::to_string(m() - 1));
  }
  switch (kind_of(index)) {
    case GeneratorKind::kSym:
      return GeneratorId::sym(pair_a_[index], pair_b_[index]);
    case GeneratorKind::kAntisym: {
      const auto p = index - pairs_;
      return GeneratorId::antisym(pair_a_[p], pair_b_[p]);
    }
    case GeneratorKind::kDiag:
      return GeneratorId::diag(static_cast<std::uint32_t>(index - 2 * pairs_ + 1));
  }
  return {};
}

SparseComplexMatrix GeneratorBasis::generator_matrix(const GeneratorId& id) const {
  check_id(id);
  std::vector<Triplet<Complex>> entries;
  switch (id.kind) {
    case GeneratorKind::kSym:
      entries = {{id.j, id.k, kInvSqrt2}, {id.k, id.j, kInvSqrt2}};
      break;
    case GeneratorKind::kAntisym:
      entries = {{id.j, id.k, Complex(0.0, -kInvSqrt2)}, {id.k, id.j, Complex(0.0, kInvSqrt2)}};
      break;
    case GeneratorKind::kDiag:
      for (std::uint32_t x = 0; x <= id.j; ++x) entries.push_back({x, x, diag_entry(id.j, x)});
      break;
  }
  return SparseComplexMatrix::from_triplets(n_, std::move(entries));
}

RealCoefficients expand_hermitian(const GeneratorBasis& basis, const SparseComplexMatrix& a, double tolerance) {
  if (a.dim() != basis.n()) throw DimensionError("matrix dimension does not match basis");
  const auto n = basis.n();
  std::vector<std::pair<std::uint32_t, double>> entries;
  std::vector<double> diag(n, 0.0);

  a.for_each([&](std::uint32_t r, std::uint32_t c, Complex v) {
    const double scale = tolerance * std::max(1.0, std::abs(v));
    if (r == c) {
      if (std::abs(v.imag()) > scale) {
        throw ValidationError("matrix is not Hermitian: diagonal entry " + std::to_string(r) +
                              " has imaginary part " + std::to_string(v.imag()));
      }
      diag[r] = v.real();
      return;
    }
    if (std::abs(v - std::conj(a.at(c, r))) > scale) {
      throw ValidationError("matrix is not Hermitian at (" + std::to_string(r) + "," + std::to_string(c) + ")");
    }
    if (r < c) {
      // Tr(S A) = sqrt2 Re A_rc, Tr(J A) = -sqrt2 Im A_rc for Hermitian A.
      entries.emplace_back(basis.sym_index(r, c), kSqrt2 * v.real());
      entries.emplace_back(basis.antisym_index(r, c), -kSqrt2 * v.imag());
    }
  });

  double prefix = 0.0;
  for (std::uint32_t l = 1; l < n; ++l) {
    prefix += diag[l - 1];
    const double coeff = GeneratorBasis::diag_scale(l) * (prefix - static_cast<double>(l) * diag[l]);
    if (coeff != 0.0) entries.emplace_back(basis.diag_index(l), coeff);
  }
  return RealCoefficients(basis.m(), std::move(entries));
}

ComplexCoefficients expand_general(const GeneratorBasis& basis, const SparseComplexMatrix& a,
                                   double trace_tolerance) {
  if (a.dim() != basis.n()) throw DimensionError("matrix dimension does not match basis");
  const Complex tr = a.trace();
  if (std::abs(tr) > trace_tolerance) {
    throw ValidationError("operator must be traceless, trace = (" + std::to_string(tr.real()) + "," +
                          std::to_string(tr.imag()) + ")");
  }
  const auto n = basis.n();
  const Complex i_unit(0.0, 1.0);
  std::vector<std::pair<std::uint32_t, Complex>> entries;
  std::vector<Complex> diag(n, 0.0);

  a.for_each([&](std::uint32_t r, std::uint32_t c, Complex v) {
    if (r == c) {
      diag[r] = v;
      return;
    }
    const auto lo = std::min(r, c);
    const auto hi = std::max(r, c);
    // Tr(S A) = (A_lh + A_hl)/sqrt2, Tr(J A) = i (A_lh - A_hl)/sqrt2.
    entries.emplace_back(basis.sym_index(lo, hi), v * kInvSqrt2);
    entries.emplace_back(basis.antisym_index(lo, hi), (r < c ? i_unit : -i_unit) * v * kInvSqrt2);
  });

  Complex prefix = 0.0;
  for (std::uint32_t l = 1; l < n; ++l) {
    prefix += diag[l - 1];
    const Complex coeff = GeneratorBasis::diag_scale(l) * (prefix - static_cast<double>(l) * diag[l]);
    if (coeff != Complex(0.0)) entries.emplace_back(basis.diag_index(l), coeff);
  }
  return ComplexCoefficients(basis.m(), std::move(entries));
}

std::vector<double> project_hermitian(const GeneratorBasis& basis, const Eigen::MatrixXcd& a) {
  const auto n = basis.n();
  if (static_cast<std::size_t>(a.rows()) != n || static_cast<std::size_t>(a.cols()) != n) {
    throw DimensionError("matrix dimension does not match basis");
  }
  std::vector<double> v(basis.m(), 0.0);
  for (std::uint32_t r = 0; r < n; ++r) {
    for (std::uint32_t c = r + 1; c < n; ++c) {
      const Complex x = a(r, c);
      v[basis.sym_index(r, c)] = kSqrt2 * x.real();
      v[basis.antisym_index(r, c)] = -kSqrt2 * x.imag();
    }
  }
  double prefix = 0.0;
  for (std::uint32_t l = 1; l < n; ++l) {
    prefix += a(l - 1, l - 1).real();
    v[basis.diag_index(l)] = GeneratorBasis::diag_scale(l) * (prefix - static_cast<double>(l) * a(l, l).real());
  }
  return v;
}

Eigen::MatrixXcd reconstruct_density(const GeneratorBasis& basis, std::span<const double> v) {
  const auto n = basis.n();
  if (v.size() != basis.m()) {
    throw DimensionError("coherence vector length " + std::to_string(v.size()) + " does not match M = " +
                         std::to_string(basis.m()));
  }
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(ni, ni);
  for (std::uint32_t r = 0; r < n; ++r) {
    for (std::uint32_t c = r + 1; c < n; ++c) {
      const double s = v[basis.sym_index(r, c)] * kInvSqrt2;
      const double j = v[basis.antisym_index(r, c)] * kInvSqrt2;
      rho(r, c) = Complex(s, -j);
      rho(c, r) = Complex(s, j);
    }
  }
  // Diagonal x collects -x c_x v_D(x) plus c_l v_D(l) for every l > x.
  double suffix = 0.0;
  for (std::uint32_t x = static_cast<std::uint32_t>(n); x-- > 0;) {
    double value = 1.0 / static_cast<double>(n) + suffix;
    if (x >= 1) {
      const double c = GeneratorBasis::diag_scale(x);
      value -= static_cast<double>(x) * c * v[basis.diag_index(x)];
      suffix += c * v[basis.diag_index(x)];
    }
    rho(x, x) = value;
  }
  return rho;
}

}  // namespace sunbloch

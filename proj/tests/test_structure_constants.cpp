#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <doctest.h>

#include "sunbloch/structure_constants.hpp"
#include "test_helpers.hpp"

using namespace sunbloch;

namespace {

// Dense M^3 lookup of an enumerated tensor.
std::vector<double> densify(const RealTensor3& t) {
  const auto m = t.axis();
  std::vector<double> dense(m * m * m, 0.0);
  for (const auto& e : t.entries) dense[(e.m * m + e.n) * m + e.s] = e.value;
  return dense;
}

}  // namespace

TEST_CASE("closed-form counts") {
  CHECK(nz_f_count(2) == 6);
  CHECK(nz_d_count(2) == 0);
  CHECK(nz_f_count(3) == 54);
  CHECK(nz_d_count(3) == 58);
}

TEST_CASE("enumerated counts equal the closed forms for N = 2..64") {
  for (std::size_t n = 2; n <= 64; n += (n < 16 ? 1 : 6)) {
    CAPTURE(n);
    CHECK(f_nonzeros(n).nnz() == nz_f_count(n));
    CHECK(d_nonzeros(n).nnz() == nz_d_count(n));
  }
  CHECK(f_nonzeros(64).nnz() == nz_f_count(64));
  CHECK(d_nonzeros(64).nnz() == nz_d_count(64));
}

TEST_CASE("SU(2) values") {
  GeneratorBasis basis(2);
  const auto f = f_nonzeros(2);
  REQUIRE(f.nnz() == 6);
  for (const auto& e : f.entries) CHECK(std::abs(std::abs(e.value) - std::sqrt(2.0)) < 1e-15);
  // [S, J] = i sqrt2 D for the sigma/sqrt2 basis.
  CHECK(f_entry(basis, 0, 1, 2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(brute_force_f(basis, 0, 1, 2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(d_nonzeros(2).nnz() == 0);
  for (std::uint32_t m = 0; m < 3; ++m) {
    for (std::uint32_t n = 0; n < 3; ++n) {
      for (std::uint32_t s = 0; s < 3; ++s) CHECK(z_entry(basis, m, n, s).real() == 0.0);
    }
  }
}

TEST_CASE("SU(3) spot value d(S01, S01, D2) = sqrt(2/3)") {
  GeneratorBasis basis(3);
  const auto s01 = basis.index_of(GeneratorId::sym(0, 1));
  const auto d2 = basis.index_of(GeneratorId::diag(2));
  CHECK(d_entry(basis, s01, s01, d2) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
  CHECK(brute_force_d(basis, s01, s01, d2) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("brute-force oracle basic properties") {
  GeneratorBasis basis(4);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(basis.m() - 1));
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = pick(rng), n = pick(rng), s = pick(rng);
    CHECK(brute_force_f(basis, m, m, s) == 0.0);
    CHECK(brute_force_d(basis, m, n, s) == doctest::Approx(brute_force_d(basis, n, m, s)));
  }
}

TEST_CASE("full equivalence with the trace-formula oracle for N <= 8") {
  for (std::size_t n = 2; n <= 8; ++n) {
    CAPTURE(n);
    GeneratorBasis basis(n);
    const auto m = basis.m();
    std::vector<SparseComplexMatrix> gens;
    for (std::uint32_t s = 0; s < m; ++s) gens.push_back(basis.generator_matrix(s));
    const auto f = densify(f_nonzeros(n));
    const auto d = densify(d_nonzeros(n));
    double worst_f = 0.0, worst_d = 0.0;
    for (std::uint32_t a = 0; a < m; ++a) {
      for (std::uint32_t b = 0; b < m; ++b) {
        const auto ab = gens[a] * gens[b];
        const auto ba = gens[b] * gens[a];
        const auto comm = ab - ba;
        const auto anti = ab + ba;
        for (std::uint32_t s = 0; s < m; ++s) {
          const double fo = (Complex(0.0, -1.0) * trace_of_product(gens[s], comm)).real();
          const double dd = trace_of_product(gens[s], anti).real();
          const auto k = (a * m + b) * m + s;
          worst_f = std::max(worst_f, std::abs(fo - f[k]));
          worst_d = std::max(worst_d, std::abs(dd - d[k]));
        }
      }
    }
    CHECK(worst_f < 1e-12);
    CHECK(worst_d < 1e-12);
  }
}

TEST_CASE("permutation symmetry of enumerated entries") {
  for (std::size_t n : {3, 5, 8}) {
    GeneratorBasis basis(n);
    const auto f = densify(f_nonzeros(n));
    const auto d = densify(d_nonzeros(n));
    const auto m = basis.m();
    const auto at = [m](const std::vector<double>& t, std::uint32_t a, std::uint32_t b, std::uint32_t c) {
      return t[(a * m + b) * m + c];
    };
    for (const auto& e : f_nonzeros(n).entries) {
      // even permutations keep the sign, odd ones flip it, bit for bit
      CHECK(at(f, e.n, e.s, e.m) == e.value);
      CHECK(at(f, e.s, e.m, e.n) == e.value);
      CHECK(at(f, e.n, e.m, e.s) == -e.value);
      CHECK(at(f, e.m, e.s, e.n) == -e.value);
      CHECK(at(f, e.s, e.n, e.m) == -e.value);
    }
    for (const auto& e : d_nonzeros(n).entries) {
      CHECK(at(d, e.n, e.s, e.m) == e.value);
      CHECK(at(d, e.s, e.m, e.n) == e.value);
      CHECK(at(d, e.n, e.m, e.s) == e.value);
      CHECK(at(d, e.m, e.s, e.n) == e.value);
      CHECK(at(d, e.s, e.n, e.m) == e.value);
    }
  }
}

TEST_CASE("commutator reconstruction [F_i, F_k] = i sum_l f_ikl F_l") {
  std::mt19937_64 rng(13);
  for (std::size_t n : {3, 6, 8}) {
    GeneratorBasis basis(n);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(basis.m() - 1));
    for (int trial = 0; trial < 40; ++trial) {
      const auto i = pick(rng), k = pick(rng);
      const auto fi = basis.generator_matrix(i), fk = basis.generator_matrix(k);
      const Eigen::MatrixXcd lhs = (fi * fk - fk * fi).to_dense();
      Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(lhs.rows(), lhs.cols());
      std::vector<SliceEntry> slice;
      z_slice(basis, i, slice);
      for (const auto& e : slice) {
        if (e.n == k && e.z.imag() != 0.0) rhs += Complex(0.0, e.z.imag()) * basis.generator_matrix(e.s).to_dense();
      }
      CHECK(testing::max_abs_diff(lhs, rhs) < 1e-12);
    }
  }
}

TEST_CASE("on-the-fly slices match the materialized F + D merge") {
  for (std::size_t n = 2; n <= 6; ++n) {
    CAPTURE(n);
    const auto z = z_nonzeros(f_nonzeros(n), d_nonzeros(n));
    CHECK(z.nnz() == nz_f_count(n) + nz_d_count(n));
    GeneratorBasis basis(n);
    std::vector<TensorEntry<Complex>> generated;
    std::vector<SliceEntry> slice;
    for (std::uint32_t m = 0; m < basis.m(); ++m) {
      z_slice(basis, m, slice);
      for (const auto& e : slice) generated.push_back({m, e.n, e.s, e.z});
    }
    CHECK(generated == z.entries);
  }
}

TEST_CASE("z_entry conventions") {
  GeneratorBasis basis(5);
  const auto z = z_nonzeros(f_nonzeros(5), d_nonzeros(5));
  for (const auto& e : z.entries) {
    if (e.m == e.n) CHECK(e.value.imag() == 0.0);
  }
  // z_mns = 2 Tr(F_m F_n F_s) on a few random triples
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(basis.m() - 1));
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = pick(rng), n = pick(rng), s = pick(rng);
    const auto prod = basis.generator_matrix(m) * basis.generator_matrix(n);
    const Complex expected = 2.0 * trace_of_product(prod, basis.generator_matrix(s));
    CHECK(std::abs(z_entry(basis, m, n, s) - expected) < 1e-13);
  }
}

TEST_CASE("sort_entries") {
  SUBCASE("sorted input is unchanged") {
    const auto f = f_nonzeros(4);
    CHECK(sort_entries(f, TensorLayout::kByMns).entries == f.entries);
  }
  SUBCASE("reverse-sorted 10-entry tensor") {
    RealTensor3 t;
    t.n = 3;
    for (std::uint32_t i = 0; i < 10; ++i) t.entries.push_back({7 - i % 8, i % 3, 9 - i < 8 ? 9 - i : 0, double(i)});
    std::reverse(t.entries.begin(), t.entries.end());
    const auto sorted = sort_entries(t, TensorLayout::kByMns);
    CHECK(sorted.nnz() == 10);
    CHECK(std::is_sorted(sorted.entries.begin(), sorted.entries.end(), [](const auto& a, const auto& b) {
      return std::tie(a.m, a.n, a.s) < std::tie(b.m, b.n, b.s);
    }));
  }
  SUBCASE("N=3 f by (s, m)") {
    const auto t = sort_entries(f_nonzeros(3), TensorLayout::kBySm);
    CHECK(t.nnz() == 54);
    CHECK(t.layout == TensorLayout::kBySm);
    CHECK(std::is_sorted(t.entries.begin(), t.entries.end(),
                         [](const auto& a, const auto& b) { return std::tie(a.s, a.m) < std::tie(b.s, b.m); }));
  }
  SUBCASE("stability on ties") {
    RealTensor3 t;
    t.n = 2;
    t.entries = {{1, 0, 2, 1.0}, {0, 0, 2, 2.0}, {1, 1, 2, 3.0}, {1, 0, 0, 4.0}};
    const auto by_s = sort_entries(t, TensorLayout::kBySm);
    CHECK(by_s.entries[0].value == 4.0);
    CHECK(by_s.entries[1].value == 2.0);
    CHECK(by_s.entries[2].value == 1.0);
    CHECK(by_s.entries[3].value == 3.0);
  }
}

TEST_CASE("per-slice density stays O(N^2)") {
  // c fixed once at N=8, then checked at larger N.
  const auto max_section = [](std::size_t n) {
    const auto src = TensorSource::on_the_fly(n);
    std::size_t worst = 0;
    for (std::uint32_t m = 0; m < src.basis().m(); ++m) worst = std::max(worst, src.z_slice_size(m));
    return worst;
  };
  const double c = double(max_section(8)) / 64.0;
  std::size_t previous = 0;
  for (std::size_t n : {8, 16, 32, 64}) {
    const auto worst = max_section(n);
    CHECK(double(worst) <= c * double(n * n) + 1e-9);
    CHECK(worst >= previous);
    previous = worst;
  }
}

TEST_CASE("TensorSource modes agree") {
  const auto lazy = TensorSource::on_the_fly(5);
  const auto full = TensorSource::materialize(5);
  CHECK(full.materialized());
  CHECK_FALSE(lazy.materialized());
  for (std::uint32_t m = 0; m < lazy.basis().m(); ++m) {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> a, b;
    lazy.for_each_f(m, [&](std::uint32_t n, std::uint32_t s, double v) { a.emplace_back(n, s, v); });
    full.for_each_f(m, [&](std::uint32_t n, std::uint32_t s, double v) { b.emplace_back(n, s, v); });
    CHECK(a == b);
    CHECK(lazy.z_slice_size(m) == full.z_slice_size(m));
  }
}

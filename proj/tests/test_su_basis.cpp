#include <cmath>
#include <random>

#include <doctest.h>

#include "sunbloch/su_basis.hpp"
#include "test_helpers.hpp"

using namespace sunbloch;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

TEST_CASE("generator matrices match their definitions") {
  SUBCASE("N=2 Diag(1) is diag(1,-1)/sqrt2") {
    GeneratorBasis basis(2);
    const auto d = basis.generator_matrix(GeneratorId::diag(1)).to_dense();
    CHECK(d(0, 0).real() == doctest::Approx(kInvSqrt2));
    CHECK(d(1, 1).real() == doctest::Approx(-kInvSqrt2));
    CHECK(std::abs(d(0, 1)) == 0.0);
  }
  SUBCASE("N=2 Sym(0,1) is sigma_x/sqrt2") {
    GeneratorBasis basis(2);
    const auto s = basis.generator_matrix(GeneratorId::sym(0, 1));
    CHECK(s.nnz() == 2);
    CHECK(std::abs(s.at(0, 1) - kInvSqrt2) < 1e-15);
    CHECK(std::abs(s.at(1, 0) - kInvSqrt2) < 1e-15);
  }
  SUBCASE("N=3 Diag(2) is diag(1,1,-2)/sqrt6") {
    GeneratorBasis basis(3);
    const auto d = basis.generator_matrix(GeneratorId::diag(2)).to_dense();
    const double c = 1.0 / std::sqrt(6.0);
    CHECK(d(0, 0).real() == doctest::Approx(c));
    CHECK(d(1, 1).real() == doctest::Approx(c));
    CHECK(d(2, 2).real() == doctest::Approx(-2.0 * c));
  }
  SUBCASE("out-of-range ids are rejected") {
    GeneratorBasis basis(3);
    CHECK_THROWS_AS(basis.generator_matrix(GeneratorId::sym(1, 1)), DimensionError);
    CHECK_THROWS_AS(basis.generator_matrix(GeneratorId::antisym(2, 3)), DimensionError);
    CHECK_THROWS_AS(basis.generator_matrix(GeneratorId::diag(0)), DimensionError);
    CHECK_THROWS_AS(basis.generator_matrix(GeneratorId::diag(3)), DimensionError);
    CHECK_THROWS_AS(basis.id_of(8), DimensionError);
    CHECK_THROWS_AS(GeneratorBasis(1), DimensionError);
  }
}

TEST_CASE("generator nonzero pattern") {
  GeneratorBasis basis(7);
  for (std::uint32_t s = 0; s < basis.m(); ++s) {
    const auto id = basis.id_of(s);
    const auto f = basis.generator_matrix(id);
    if (id.kind == GeneratorKind::kDiag) {
      CHECK(f.nnz() == id.j + 1);
    } else {
      CHECK(f.nnz() == 2);
    }
    CHECK(f.hermiticity_defect() == 0.0);
    CHECK(std::abs(f.trace()) < 1e-15);
  }
}

TEST_CASE("index bijection for N <= 64") {
  for (std::size_t n = 2; n <= 64; ++n) {
    GeneratorBasis basis(n);
    std::uint32_t expected = 0;
    // canonical order: Sym block, Antisym block, Diag block
    for (std::uint32_t j = 0; j < n; ++j) {
      for (std::uint32_t k = j + 1; k < n; ++k) REQUIRE(basis.index_of(GeneratorId::sym(j, k)) == expected++);
    }
    for (std::uint32_t j = 0; j < n; ++j) {
      for (std::uint32_t k = j + 1; k < n; ++k) REQUIRE(basis.index_of(GeneratorId::antisym(j, k)) == expected++);
    }
    for (std::uint32_t l = 1; l < n; ++l) REQUIRE(basis.index_of(GeneratorId::diag(l)) == expected++);
    REQUIRE(expected == basis.m());
    for (std::uint32_t s = 0; s < basis.m(); ++s) REQUIRE(basis.index_of(basis.id_of(s)) == s);
  }
}

TEST_CASE("orthonormality for N <= 32") {
  for (std::size_t n : {2, 3, 5, 8, 13, 21, 32}) {
    GeneratorBasis basis(n);
    std::vector<SparseComplexMatrix> f;
    for (std::uint32_t s = 0; s < basis.m(); ++s) f.push_back(basis.generator_matrix(s));
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t k = 0; k < f.size(); ++k) {
        const Complex t = trace_of_product(f[i], f[k]);
        worst = std::max(worst, std::abs(t - (i == k ? 1.0 : 0.0)));
      }
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("expand_hermitian") {
  SUBCASE("sigma_z has coefficient sqrt2 on Diag(1)") {
    GeneratorBasis basis(2);
    const auto sz = SparseComplexMatrix::from_triplets(2, {{0, 0, 1.0}, {1, 1, -1.0}});
    const auto h = expand_hermitian(basis, sz);
    CHECK(h.nnz() == 1);
    CHECK(h[basis.diag_index(1)] == doctest::Approx(std::sqrt(2.0)));
    CHECK(h.is_zero(0));
  }
  SUBCASE("a generator expands to a unit vector") {
    GeneratorBasis basis(5);
    for (std::uint32_t s : {0u, 7u, 12u, 23u}) {
      const auto h = expand_hermitian(basis, basis.generator_matrix(s));
      REQUIRE(h.nnz() == 1);
      CHECK(h[s] == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  SUBCASE("dimer hopping term, 2 bosons, J=-1") {
    // Frozen from dense Tr(F_s H) on the explicit 3x3 matrix.
    GeneratorBasis basis(3);
    const double r2 = std::sqrt(2.0);
    const auto hj = SparseComplexMatrix::from_triplets(3, {{0, 1, -r2}, {1, 0, -r2}, {1, 2, -r2}, {2, 1, -r2}});
    const auto h = expand_hermitian(basis, hj);
    CHECK(h.nnz() == 2);
    CHECK(h[basis.sym_index(0, 1)] == doctest::Approx(-2.0));
    CHECK(h[basis.sym_index(1, 2)] == doctest::Approx(-2.0));
  }
  SUBCASE("non-Hermitian input is rejected") {
    GeneratorBasis basis(3);
    const auto a = SparseComplexMatrix::from_triplets(3, {{0, 1, 1.0}});
    CHECK_THROWS_AS(expand_hermitian(basis, a), ValidationError);
    const auto b = SparseComplexMatrix::from_triplets(3, {{2, 2, Complex(0.0, 1.0)}});
    CHECK_THROWS_AS(expand_hermitian(basis, b), ValidationError);
  }
  SUBCASE("completeness on random Hermitian matrices") {
    std::mt19937_64 rng(7);
    for (std::size_t n : {2, 4, 9, 16}) {
      GeneratorBasis basis(n);
      const Eigen::MatrixXcd a = testing::random_hermitian(n, rng);
      const auto coeffs = expand_hermitian(basis, SparseComplexMatrix::from_dense(a));
      Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Identity(a.rows(), a.cols()) * (a.trace() / double(n));
      for (std::size_t i = 0; i < coeffs.nnz(); ++i) {
        rebuilt += coeffs.values()[i] * basis.generator_matrix(coeffs.indices()[i]).to_dense();
      }
      CHECK(testing::max_abs_diff(rebuilt, a) < 1e-12);
    }
  }
}

TEST_CASE("expand_general") {
  SUBCASE("lowering unit |0><1|") {
    GeneratorBasis basis(2);
    const auto g = SparseComplexMatrix::from_triplets(2, {{0, 1, 1.0}});
    const auto l = expand_general(basis, g);
    CHECK(l.nnz() == 2);
    CHECK(std::abs(l[basis.sym_index(0, 1)] - Complex(kInvSqrt2, 0.0)) < 1e-15);
    CHECK(std::abs(l[basis.antisym_index(0, 1)] - Complex(0.0, kInvSqrt2)) < 1e-15);
  }
  SUBCASE("a generator expands to a unit vector") {
    GeneratorBasis basis(4);
    const auto l = expand_general(basis, basis.generator_matrix(3));
    REQUIRE(l.nnz() == 1);
    CHECK(std::abs(l[3] - 1.0) < 1e-15);
  }
  SUBCASE("nonzero trace is rejected and reported") {
    GeneratorBasis basis(3);
    const auto a = SparseComplexMatrix::from_triplets(3, {{0, 0, 0.5}});
    try {
      (void)expand_general(basis, a);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("0.5") != std::string::npos);
    }
  }
  SUBCASE("reconstruction of random traceless operators") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {2, 5, 11}) {
      GeneratorBasis basis(n);
      const auto a = testing::random_sparse(n, 0.5, rng, false, true);
      const auto l = expand_general(basis, a);
      Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(long(n), long(n));
      for (std::size_t i = 0; i < l.nnz(); ++i) {
        rebuilt += l.values()[i] * basis.generator_matrix(l.indices()[i]).to_dense();
      }
      CHECK(testing::max_abs_diff(rebuilt, a.to_dense()) < 1e-12);
    }
  }
}

TEST_CASE("reconstruct_density") {
  SUBCASE("zero vector is the maximally mixed state") {
    GeneratorBasis basis(4);
    std::vector<double> v(basis.m(), 0.0);
    const auto rho = reconstruct_density(basis, v);
    CHECK(testing::max_abs_diff(rho, Eigen::MatrixXcd::Identity(4, 4) / 4.0) < 1e-15);
  }
  SUBCASE("Bloch north pole") {
    GeneratorBasis basis(2);
    const std::vector<double> v{0.0, 0.0, kInvSqrt2};
    const auto rho = reconstruct_density(basis, v);
    CHECK(std::abs(rho(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(rho(1, 1)) < 1e-15);
  }
  SUBCASE("round trip through projection, N=5") {
    std::mt19937_64 rng(3);
    GeneratorBasis basis(5);
    const auto rho = testing::random_density(5, rng);
    const auto v = project_hermitian(basis, rho);
    CHECK(testing::max_abs_diff(reconstruct_density(basis, v), rho) < 1e-12);
    CHECK(std::abs(reconstruct_density(basis, v).trace() - 1.0) < 1e-14);
  }
  SUBCASE("length mismatch") {
    GeneratorBasis basis(3);
    std::vector<double> v(7, 0.0);
    CHECK_THROWS_AS(reconstruct_density(basis, v), DimensionError);
  }
}

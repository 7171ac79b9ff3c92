#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sunbloch/sparse_matrix.hpp"

namespace sunbloch::testing {

inline Eigen::MatrixXcd random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd a(ni, ni);
  for (Eigen::Index r = 0; r < ni; ++r) {
    for (Eigen::Index c = 0; c < ni; ++c) a(r, c) = Complex(g(rng), g(rng));
  }
  return (a + a.adjoint()) / 2.0;
}

/// Random density matrix: A A^dagger normalised to unit trace.
inline Eigen::MatrixXcd random_density(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd a(ni, ni);
  for (Eigen::Index r = 0; r < ni; ++r) {
    for (Eigen::Index c = 0; c < ni; ++c) a(r, c) = Complex(g(rng), g(rng));
  }
  Eigen::MatrixXcd rho = a * a.adjoint();
  return rho / rho.trace();
}

/// Sparse random complex matrix with roughly `fill` fraction of entries.
inline SparseComplexMatrix random_sparse(std::size_t n, double fill, std::mt19937_64& rng, bool hermitian,
                                         bool traceless) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u;
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(ni, ni);
  for (Eigen::Index r = 0; r < ni; ++r) {
    for (Eigen::Index c = 0; c < ni; ++c) {
      if (u(rng) < fill) a(r, c) = Complex(g(rng), g(rng));
    }
  }
  if (hermitian) a = ((a + a.adjoint()) / 2.0).eval();
  if (traceless) {
    const Complex shift = a.trace() / static_cast<double>(n);
    for (Eigen::Index r = 0; r < ni; ++r) a(r, r) -= shift;
  }
  return SparseComplexMatrix::from_dense(a);
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace sunbloch::testing

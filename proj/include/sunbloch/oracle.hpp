#pragma once

// Dense reference implementations. Slow on purpose; only for small N.

#include <cstddef>

#include <Eigen/Dense>

#include "sunbloch/models.hpp"

namespace sunbloch {

inline constexpr std::size_t kOracleMaxN = 32;
inline constexpr std::size_t kPositivityMaxN = 256;

/// -i[H0 + theta H1, rho] + sum_p gamma_p (L rho L^+ - {L^+ L, rho} / 2)
Eigen::MatrixXcd apply_liouvillian_theta(const ModelSpec& model, double theta, const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd apply_liouvillian(const ModelSpec& model, double t, const Eigen::MatrixXcd& rho);
/// Dissipative part only.
Eigen::MatrixXcd apply_dissipator(const ModelSpec& model, const Eigen::MatrixXcd& rho);

/// Basis projections of the dense generator:
///   q0_sm = Tr(F_s L_H0(F_m)), q1_sm likewise for H1,
///   r_sm  = Tr(F_s L_D(F_m)),  k_s = Tr(F_s L_D(I/N)).
struct OracleProjection {
  Eigen::MatrixXd q0;
  Eigen::MatrixXd q1;
  Eigen::MatrixXd r;
  Eigen::VectorXd k;
  /// max over m of |Tr L(F_m)|
  double trace_defect = 0.0;
};
OracleProjection compile_oracle(const ModelSpec& model);

/// Classical RK4 on the dense master equation with the same stage-time
/// convention as the coherence-vector integrator.
Eigen::MatrixXcd oracle_propagate(const ModelSpec& model, const Eigen::MatrixXcd& rho0, double t_end, double dt);

/// Smallest eigenvalue of the Hermitian part of rho.
double positivity_check(const Eigen::MatrixXcd& rho);

}  // namespace sunbloch

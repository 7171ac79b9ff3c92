#include "sunbloch/oracle.hpp"

#include <cmath>
#include <vector>

#include "sunbloch/error.hpp"
#include "sunbloch/su_basis.hpp"

namespace sunbloch {
namespace {

void guard(std::size_t n, std::size_t limit, const char* what) {
  if (n > limit) {
    throw SizeGuardError(std::string(what) + " is limited to N <= " + std::to_string(limit) + ", got N=" +
                         std::to_string(n));
  }
}

Eigen::MatrixXcd commutator_part(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& rho) {
  const Complex minus_i(0.0, -1.0);
  return minus_i * (h * rho - rho * h);
}

// Tr(A B) for dense matrices.
Complex trace_product(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.transpose().array() * b.array()).sum();
}

}  // namespace

Eigen::MatrixXcd apply_dissipator(const ModelSpec& model, const Eigen::MatrixXcd& rho) {
  guard(model.n, kOracleMaxN, "dense Liouvillian");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (const auto& ch : model.channels) {
    const Eigen::MatrixXcd l = ch.l.to_dense();
    const Eigen::MatrixXcd ld = l.adjoint();
    const Eigen::MatrixXcd ldl = ld * l;
    out += ch.gamma * (l * rho * ld - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

Eigen::MatrixXcd apply_liouvillian_theta(const ModelSpec& model, double theta, const Eigen::MatrixXcd& rho) {
  guard(model.n, kOracleMaxN, "dense Liouvillian");
  const Eigen::MatrixXcd h = model.h0.to_dense() + theta * model.h1.to_dense();
  return commutator_part(h, rho) + apply_dissipator(model, rho);
}

Eigen::MatrixXcd apply_liouvillian(const ModelSpec& model, double t, const Eigen::MatrixXcd& rho) {
  return apply_liouvillian_theta(model, model.drive(t), rho);
}

OracleProjection compile_oracle(const ModelSpec& model) {
  guard(model.n, kOracleMaxN, "compile oracle");
  const GeneratorBasis basis(model.n);
  const auto m = static_cast<Eigen::Index>(basis.m());
  std::vector<Eigen::MatrixXcd> f;
  f.reserve(basis.m());
  for (std::uint32_t s = 0; s < basis.m(); ++s) f.push_back(basis.generator_matrix(s).to_dense());

  const Eigen::MatrixXcd h0 = model.h0.to_dense();
  const Eigen::MatrixXcd h1 = model.h1.to_dense();
  OracleProjection out;
  out.q0 = Eigen::MatrixXd::Zero(m, m);
  out.q1 = Eigen::MatrixXd::Zero(m, m);
  out.r = Eigen::MatrixXd::Zero(m, m);
  out.k = Eigen::VectorXd::Zero(m);
  for (Eigen::Index col = 0; col < m; ++col) {
    const auto& fm = f[static_cast<std::size_t>(col)];
    const Eigen::MatrixXcd a0 = commutator_part(h0, fm);
    const Eigen::MatrixXcd a1 = commutator_part(h1, fm);
    const Eigen::MatrixXcd d = apply_dissipator(model, fm);
    out.trace_defect = std::max(out.trace_defect, std::abs((a0 + a1 + d).trace()));
    for (Eigen::Index row = 0; row < m; ++row) {
      const auto& fs = f[static_cast<std::size_t>(row)];
      out.q0(row, col) = trace_product(fs, a0).real();
      out.q1(row, col) = trace_product(fs, a1).real();
      out.r(row, col) = trace_product(fs, d).real();
    }
  }
  const auto ni = static_cast<Eigen::Index>(model.n);
  const Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(ni, ni) / static_cast<double>(model.n);
  const Eigen::MatrixXcd dk = apply_dissipator(model, mixed);
  for (Eigen::Index row = 0; row < m; ++row) out.k(row) = trace_product(f[static_cast<std::size_t>(row)], dk).real();
  return out;
}

Eigen::MatrixXcd oracle_propagate(const ModelSpec& model, const Eigen::MatrixXcd& rho0, double t_end, double dt) {
  guard(model.n, kOracleMaxN, "oracle propagation");
  if (!(dt > 0.0)) throw NumericError("dt must be positive");
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  Eigen::MatrixXcd rho = rho0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    auto rhs = [&](double stage_time, const Eigen::MatrixXcd& x) {
      return apply_liouvillian_theta(model, model.drive.stage_value(t, dt, stage_time), x);
    };
    const Eigen::MatrixXcd k1 = rhs(t, rho);
    const Eigen::MatrixXcd k2 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k1);
    const Eigen::MatrixXcd k3 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k2);
    const Eigen::MatrixXcd k4 = rhs(t + dt, rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!rho.allFinite()) throw NumericError("oracle propagation produced non-finite values at step " + std::to_string(i));
  }
  return rho;
}

double positivity_check(const Eigen::MatrixXcd& rho) {
  guard(static_cast<std::size_t>(rho.rows()), kPositivityMaxN, "positivity check");
  const Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace sunbloch

#include "sunbloch/propagate.hpp"

#include <cmath>
#include <sstream>

#include "sunbloch/error.hpp"

namespace sunbloch {

std::vector<double> initial_coherence(const GeneratorBasis& basis, const Eigen::MatrixXcd& rho0) {
  const auto n = static_cast<Eigen::Index>(basis.n());
  if (rho0.rows() != n || rho0.cols() != n) throw DimensionError("initial density matrix has the wrong size");
  const double herm = (rho0 - rho0.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw ValidationError("initial density matrix is not Hermitian");
  const Complex tr = rho0.trace();
  if (std::abs(tr - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "initial density matrix has trace " << tr.real() << " instead of 1";
    throw ValidationError(msg.str());
  }
  return project_hermitian(basis, rho0);
}

double purity(std::size_t n, std::span<const double> v) {
  double sum = 1.0 / static_cast<double>(n);
  for (double x : v) sum += x * x;
  return sum;
}

std::vector<double> observables(const GeneratorBasis& basis, std::span<const double> v) {
  const auto n = basis.n();
  if (v.size() != basis.m()) throw DimensionError("coherence vector length differs from M");
  // p_x = 1/N + sum_{l > x} c_l v_l - x c_x v_x
  std::vector<double> p(n);
  double suffix = 0.0;
  for (std::size_t x = n; x-- > 0;) {
    double own = 0.0;
    if (x >= 1) {
      const auto l = static_cast<std::uint32_t>(x);
      own = GeneratorBasis::diag_entry(l, l) * v[basis.diag_index(l)];
    }
    p[x] = 1.0 / static_cast<double>(n) + suffix + own;
    if (x >= 1) {
      const auto l = static_cast<std::uint32_t>(x);
      suffix += GeneratorBasis::diag_scale(l) * v[basis.diag_index(l)];
    }
  }
  return p;
}

void bloch_rhs(const CompiledBloch& sys, double theta, std::span<const double> v, std::span<double> out) {
  std::copy(sys.k.begin(), sys.k.end(), out.begin());
  sys.q0.multiply_add(v, out);
  if (theta != 0.0) sys.q1.multiply_add(v, out, theta);
  sys.r.multiply_add(v, out);
}

void rk4_step(const CompiledBloch& sys, const DriveFunction& drive, std::vector<double>& v, double t, double dt,
              Rk4Workspace& work) {
  const auto m = v.size();
  const double half = 0.5 * dt;
  const double mid = drive.stage_value(t, dt, t + half);
  bloch_rhs(sys, drive.stage_value(t, dt, t), v, work.k1);
  for (std::size_t i = 0; i < m; ++i) work.tmp[i] = v[i] + half * work.k1[i];
  bloch_rhs(sys, mid, work.tmp, work.k2);
  for (std::size_t i = 0; i < m; ++i) work.tmp[i] = v[i] + half * work.k2[i];
  bloch_rhs(sys, mid, work.tmp, work.k3);
  for (std::size_t i = 0; i < m; ++i) work.tmp[i] = v[i] + dt * work.k3[i];
  bloch_rhs(sys, drive.stage_value(t, dt, t + dt), work.tmp, work.k4);
  const double w = dt / 6.0;
  bool finite = true;
  for (std::size_t i = 0; i < m; ++i) {
    v[i] += w * (work.k1[i] + 2.0 * work.k2[i] + 2.0 * work.k3[i] + work.k4[i]);
    finite = finite && std::isfinite(v[i]);
  }
  if (!finite) {
    std::ostringstream msg;
    msg << "state became non-finite in the step starting at t=" << t << " (dt=" << dt << ")";
    throw NumericError(msg.str());
  }
}

PropagationResult propagate(const CompiledBloch& sys, const DriveFunction& drive, std::vector<double> v0,
                            double t_end, double dt, const Observer& observer, const PropagationOptions& options) {
  if (v0.size() != sys.m) throw DimensionError("initial coherence vector length differs from M");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw NumericError("t_end must be finite and non-negative");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw NumericError("dt must be positive");
  if (options.stride == 0) throw NumericError("observer stride must be positive");

  const double steps_real = t_end / dt;
  const auto steps = static_cast<std::size_t>(std::llround(steps_real));
  if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * std::max(1.0, steps_real)) {
    throw NumericError("t_end is not a whole number of steps of size dt");
  }
  if (drive.kind == DriveKind::kPiecewiseConstant) {
    const double per_half = 0.5 * drive.period / dt;
    if (std::abs(per_half - std::round(per_half)) > 1e-9 * std::max(1.0, per_half) || std::round(per_half) < 1.0) {
      throw NumericError("dt must divide half the drive period so switches fall on step boundaries");
    }
  }

  PropagationResult result;
  result.v = std::move(v0);
  auto record = [&](std::size_t i) {
    const double excess = purity(sys.n, result.v) - 1.0;
    result.max_purity_excess = std::max(result.max_purity_excess, excess);
    if (excess > options.purity_tolerance) result.purity_warning = true;
    if (observer) observer(i, static_cast<double>(i) * dt, result.v);
  };
  record(0);
  Rk4Workspace work(sys.m);
  for (std::size_t i = 0; i < steps; ++i) {
    rk4_step(sys, drive, result.v, static_cast<double>(i) * dt, dt, work);
    if ((i + 1) % options.stride == 0 || i + 1 == steps) record(i + 1);
  }
  result.steps = steps;
  result.t = static_cast<double>(steps) * dt;
  return result;
}

}  // namespace sunbloch

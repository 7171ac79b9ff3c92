#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sunbloch/bloch_compile.hpp"
#include "sunbloch/drive.hpp"
#include "sunbloch/su_basis.hpp"

namespace sunbloch {

/// v_j = Tr(F_j rho0). rho0 must be Hermitian with unit trace (1e-10).
std::vector<double> initial_coherence(const GeneratorBasis& basis, const Eigen::MatrixXcd& rho0);

/// 1/N + |v|^2 = Tr rho^2.
double purity(std::size_t n, std::span<const double> v);

/// Diagonal probabilities p_x = <x|rho|x> from the Diag components of v.
std::vector<double> observables(const GeneratorBasis& basis, std::span<const double> v);

/// Scratch vectors for rk4_step, sized once per system.
struct Rk4Workspace {
  explicit Rk4Workspace(std::size_t m) : k1(m), k2(m), k3(m), k4(m), tmp(m) {}
  std::vector<double> k1, k2, k3, k4, tmp;
};

/// dv/dt = (Q0 + theta Q1 + R) v + K evaluated into out.
void bloch_rhs(const CompiledBloch& sys, double theta, std::span<const double> v, std::span<double> out);

/// One classical RK4 step from t to t + dt, in place. Throws NumericError
/// when the new state is not finite.
void rk4_step(const CompiledBloch& sys, const DriveFunction& drive, std::vector<double>& v, double t, double dt,
              Rk4Workspace& work);

struct PropagationResult {
  std::vector<double> v;
  double t = 0.0;
  std::size_t steps = 0;
  /// Largest value of Tr rho^2 - 1 seen at recorded points (positive means
  /// the state left the physical region by that much).
  double max_purity_excess = 0.0;
  bool purity_warning = false;
};

/// Called with (step index, time, state).
using Observer = std::function<void(std::size_t, double, std::span<const double>)>;

struct PropagationOptions {
  std::size_t stride = 1;          // observer every `stride` steps, plus the final state
  double purity_tolerance = 1e-8;  // warning threshold for Tr rho^2 - 1
};

/// Integrates from t = 0 to t_end in round(t_end / dt) steps. Times are
/// step_index * dt. For the piecewise drive, T/2 must be a whole number of
/// steps. The observer sees step 0 and every stride-th step.
PropagationResult propagate(const CompiledBloch& sys, const DriveFunction& drive, std::vector<double> v0,
                            double t_end, double dt, const Observer& observer = {},
                            const PropagationOptions& options = {});

}  // namespace sunbloch

#pragma once

// Assembly of the real coherence-vector ODE
//
//   dv/dt = (Q0 + theta(t) Q1 + R) v + K
//
// from generator-basis coefficients of the Hamiltonian parts and the
// dissipator channels:
//
//   q_sn = sum_m f_mns h_m
//   k_s  = (i gamma / N) sum_jk l_j conj(l_k) f_jks
//   r_sm = -(gamma / 2) Im sum_l F_ls Z_lm,   F_ls = sum_j l_j f_jls,
//                                              Z_lm = sum_k conj(l_k) z_klm
//
// Two assembly strategies produce bitwise identical matrices:
//   kGlobalSort  scales whole tensor slices into coordinate lists, sorts them
//                with counting sorts and accumulates;
//   kRowBlocked  builds one output row at a time from a single tensor slice,
//                using the cyclic symmetry f_jls = f_lsj = f_sjl and
//                z_klm = z_lmk. Peak memory is one row plus the Z matrix.
// Both accumulate duplicates in ascending order of the summed index.

#include <cstddef>
#include <span>
#include <vector>

#include "sunbloch/models.hpp"
#include "sunbloch/sparse_matrix.hpp"
#include "sunbloch/structure_constants.hpp"
#include "sunbloch/su_basis.hpp"

namespace sunbloch {

struct HamiltonianDecomposition {
  RealCoefficients h0;
  RealCoefficients h1;
};

struct DissipatorChannel {
  ComplexCoefficients l;
  double gamma = 1.0;
};

struct CompiledBloch {
  std::size_t n = 0;
  std::size_t m = 0;
  RealCsrMatrix q0;
  RealCsrMatrix q1;
  RealCsrMatrix r;
  std::vector<double> k;

  friend bool operator==(const CompiledBloch&, const CompiledBloch&) = default;
};

enum class AssemblyStrategy { kAuto, kGlobalSort, kRowBlocked };

struct CompileOptions {
  AssemblyStrategy strategy = AssemblyStrategy::kAuto;
  /// Multiply the drift K by the channel rate, like R. Off reproduces a
  /// drift term without the rate.
  bool rate_scales_drift = true;
  /// kAuto picks kGlobalSort while its coordinate lists fit in this many bytes.
  std::size_t memory_budget_bytes = std::size_t{1} << 30;
};

/// Bytes of the coordinate lists kGlobalSort would allocate for R.
std::size_t global_sort_bytes(std::span<const DissipatorChannel> channels, const TensorSource& tensors);

RealCsrMatrix assemble_Q(const RealCoefficients& h, const TensorSource& tensors,
                         AssemblyStrategy strategy = AssemblyStrategy::kRowBlocked);

std::vector<double> assemble_K(std::span<const DissipatorChannel> channels, const TensorSource& tensors,
                               bool rate_scales_drift = true);

RealCsrMatrix assemble_R(std::span<const DissipatorChannel> channels, const TensorSource& tensors,
                         AssemblyStrategy strategy = AssemblyStrategy::kRowBlocked);

CompiledBloch compile(const HamiltonianDecomposition& h, std::span<const DissipatorChannel> channels,
                      const TensorSource& tensors, const CompileOptions& options = {});

/// Generator-basis coefficients of a model's Hamiltonian parts and channels.
struct DecomposedModel {
  HamiltonianDecomposition h;
  std::vector<DissipatorChannel> channels;
};
DecomposedModel decompose(const GeneratorBasis& basis, const ModelSpec& model);

/// Validates, decomposes and compiles a model.
CompiledBloch compile(const ModelSpec& model, const TensorSource& tensors, const CompileOptions& options = {});

/// Sizes of the intermediate scaled tensors for one channel: number of
/// nonzero (l, s) in F and (l, m) in Z after accumulation.
struct IntermediateSizes {
  std::size_t f_scaled = 0;
  std::size_t z_scaled = 0;
};
IntermediateSizes intermediate_sizes(const DissipatorChannel& channel, const TensorSource& tensors);

}  // namespace sunbloch

#pragma once

// Model descriptions: the driven dissipative bosonic dimer and generic
// models read from text files.
//
// Dimer, N Fock states |n1> with n1 = 0..N-1 and n2 = N-1-n1:
//   H0 = J (b1^+ b2 + b1 b2^+) + 2U/(N-1) sum_j n_j (n_j - 1) + E (n2 - n1)
//   H1 = A (n2 - n1),        H(t) = H0 + theta(t) H1
//   L  = c (b1^+ + b2^+)(b1 - b2) = c (n1 - n2 - b1^+ b2 + b2^+ b1)
// With GammaConvention::kAmplitude (default) c = gamma/(N-1) and the channel
// rate is 1; with kRate c = 1/(N-1) and the channel rate is gamma.

#include <cstddef>
#include <filesystem>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sunbloch/drive.hpp"
#include "sunbloch/sparse_matrix.hpp"

namespace sunbloch {

enum class GammaConvention { kAmplitude, kRate };

struct DimerParams {
  std::size_t n = 2;
  double J = -1.0;
  double U = 1.0;
  double E = 1.0;
  double A = 1.5;
  double T = 6.283185307179586;
  double gamma = 0.1;
  DriveKind drive = DriveKind::kPiecewiseConstant;
  GammaConvention convention = GammaConvention::kAmplitude;
};

struct ChannelSpec {
  SparseComplexMatrix l;
  double gamma = 1.0;
};

/// Initial density matrix: a Fock/basis projector |k><k| or I/N.
struct InitialState {
  enum class Kind { kBasisState, kMaximallyMixed };
  Kind kind = Kind::kBasisState;
  std::size_t index = 0;

  Eigen::MatrixXcd density(std::size_t n) const;
};

struct ModelSpec {
  std::size_t n = 0;
  SparseComplexMatrix h0;
  SparseComplexMatrix h1;
  DriveFunction drive;
  std::vector<ChannelSpec> channels;
  InitialState initial;
};

std::pair<SparseComplexMatrix, SparseComplexMatrix> dimer_hamiltonian_parts(const DimerParams& p);
SparseComplexMatrix dimer_dissipator(const DimerParams& p);
ModelSpec dimer_model(const DimerParams& p);

/// Throws ValidationError naming the violated invariant.
void validate_model(const ModelSpec& model);

/// Reads a model file. Line-oriented, '#' starts a comment:
///   type = dimer      followed by N, J, U, E, A, T, gamma, drive,
///                     gamma_convention, initial
///   type = generic    followed by N, drive, period, initial and matrix lines
///     H0 <row> <col> <re> <im>
///     H1 <row> <col> <re> <im>
///     channel <rate>
///     L <row> <col> <re> <im>       (belongs to the latest channel)
/// `initial` is `basis:<k>` or `mixed`. Errors carry the line number.
ModelSpec load_model(const std::filesystem::path& path);

InitialState parse_initial_state(const std::string& text, std::size_t n);
GammaConvention parse_gamma_convention(const std::string& text);

}  // namespace sunbloch

#pragma once

#include <string>
#include <string_view>

namespace sunbloch {

enum class DriveKind { kNone, kPiecewiseConstant, kSinusoidal };

/// Periodic modulation theta(t) of the drive-coupled Hamiltonian part.
///   kPiecewiseConstant: +1 on [0, T/2), -1 on [T/2, T), periodic
///   kSinusoidal:        sin(2 pi t / T)
///   kNone:              0
struct DriveFunction {
  DriveKind kind = DriveKind::kNone;
  double period = 1.0;

  double operator()(double t) const;

  /// Value used by an integrator stage at `stage_time` inside the step
  /// [step_start, step_start + dt]. The piecewise drive is sampled at the
  /// step midpoint, so a step ending exactly on a switch keeps the value it
  /// had inside the step.
  double stage_value(double step_start, double dt, double stage_time) const;
};

DriveKind parse_drive_kind(std::string_view name);
std::string to_string(DriveKind kind);

}  // namespace sunbloch

#include "sunbloch/drive.hpp"

#include <cmath>
#include <numbers>

#include "sunbloch/error.hpp"

namespace sunbloch {

double DriveFunction::operator()(double t) const {
  switch (kind) {
    case DriveKind::kNone:
      return 0.0;
    case DriveKind::kSinusoidal:
      return std::sin(2.0 * std::numbers::pi * t / period);
    case DriveKind::kPiecewiseConstant: {
      double phase = std::fmod(t, period);
      if (phase < 0.0) phase += period;
      return phase < 0.5 * period ? 1.0 : -1.0;
    }
  }
  return 0.0;
}

double DriveFunction::stage_value(double step_start, double dt, double stage_time) const {
  if (kind == DriveKind::kPiecewiseConstant) return (*this)(step_start + 0.5 * dt);
  return (*this)(stage_time);
}

DriveKind parse_drive_kind(std::string_view name) {
  if (name == "none") return DriveKind::kNone;
  if (name == "piecewise") return DriveKind::kPiecewiseConstant;
  if (name == "sinusoidal") return DriveKind::kSinusoidal;
  throw ConfigError("unknown drive kind '" + std::string(name) + "' (expected piecewise, sinusoidal or none)");
}

std::string to_string(DriveKind kind) {
  switch (kind) {
    case DriveKind::kNone:
      return "none";
    case DriveKind::kPiecewiseConstant:
      return "piecewise";
    case DriveKind::kSinusoidal:
      return "sinusoidal";
  }
  return "none";
}

}  // namespace sunbloch

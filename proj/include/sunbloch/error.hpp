#pragma once

#include <stdexcept>
#include <string>

namespace sunbloch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Index or size outside the range allowed by the basis dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input matrix violates a structural requirement (Hermiticity, trace, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or model file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Integration produced non-finite values or was asked to do something
/// numerically inconsistent (e.g. dt not aligned with the drive period).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Dense reference path refused because N exceeds its guard.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

/// Tensor cache file problems. Each failure mode has its own kind so the
/// caller can tell a stale file from a damaged one.
class CacheError : public Error {
 public:
  enum class Kind { kIo, kCorruptHeader, kDimensionMismatch, kTruncated, kIntegrity };

  CacheError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace sunbloch

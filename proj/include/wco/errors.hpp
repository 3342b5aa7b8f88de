#pragma once
// Error taxonomy shared across the library.
//
// Every failure mode the CLI maps to a nonzero exit code derives from
// LabError, so call sites can tell usage problems (caller bug, exit 2)
// from data-driven numeric aborts (exit 3).

#include <stdexcept>
#include <string>

namespace wco {

struct LabError : std::runtime_error {
  explicit LabError(const std::string& what) : std::runtime_error(what) {}
};

// Input violates a documented precondition.
struct UsageError : LabError {
  using LabError::LabError;
};

// The stored approximant cannot certify the requested quantity.
// fail_index identifies the first uncertifiable item (continued-fraction
// term index, denominator q, ...).
struct InsufficientPrecision : LabError {
  long fail_index;
  InsufficientPrecision(const std::string& what, long idx)
      : LabError(what), fail_index(idx) {}
};

// Evaluation outside the mathematical domain (signed factor with a
// fractional power at a negative base, invalid parameter combinations).
struct DomainError : LabError {
  using LabError::LabError;
};

// A configured exponent or search budget was exceeded.
struct OverflowError : LabError {
  using LabError::LabError;
};

struct EmptySequence : LabError {
  using LabError::LabError;
};

// A backward orbit lands exactly on a zero of the weight.
struct OrbitHitsZero : LabError {
  using LabError::LabError;
};

// A negative power requires dividing by a vanishing weight factor.
struct DivisionAtZero : LabError {
  using LabError::LabError;
};

// The requested truncation cannot push the certified tail below the
// requested tolerance.
struct TailNotSummable : LabError {
  using LabError::LabError;
};

// Rotated copies of a symbol leave an uncovered gap on the circle.
struct NotCovering : LabError {
  using LabError::LabError;
};

}  // namespace wco

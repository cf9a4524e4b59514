#pragma once

#include <stdexcept>
#include <string>

namespace thermrom {

/// Configuration or input file problem (bad JSON, violated invariant).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A body cannot be resolved on the requested grid spacing.
struct GeometryUnresolvable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested time step exceeds the explicit-scheme stability limit.
struct StabilityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Optimizer exhausted its iteration and restart budget.
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Trial deviation curve is still rising at the measurement horizon.
struct NotStationary : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Regression input has no spread in the independent variable.
struct DegenerateInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Model and schedule disagree on body/source ids.
struct IdMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two traces share no overlapping time range.
struct NoOverlap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace thermrom

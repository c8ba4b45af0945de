#pragma once

#include <stdexcept>
#include <string>

namespace rankone {

/// Malformed or inconsistent input (config files, schedules, scan requests).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A computation needs more tower stages or offset bits than are available.
struct ResourceCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Geometry is not derived far enough (or the depth cap is hit).
struct DepthCapError : ResourceCapError {
  DepthCapError(const std::string& what, int required_stage)
      : ResourceCapError(what), required_stage(required_stage) {}
  int required_stage;
};

/// Sampled offsets cannot separate the columns a point visits.
struct PrecisionError : ResourceCapError {
  using ResourceCapError::ResourceCapError;
};

}  // namespace rankone

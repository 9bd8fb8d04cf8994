#pragma once

#include <stdexcept>
#include <string>

namespace lasalt {

/// Invalid or out-of-range configuration. CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite state or aborted integration. CLI exit code 3.
struct NumericalFailure : std::runtime_error {
  explicit NumericalFailure(const std::string& what, double when = 0.0)
      : std::runtime_error(what), t(when) {}
  double t;
};

/// Filesystem trouble while writing outputs. CLI exit code 4.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lasalt

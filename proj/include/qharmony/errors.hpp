#pragma once

#include <stdexcept>
#include <string>

namespace qharmony {

/// Bad configuration: unknown key, malformed value, out-of-range parameter.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical contract violation: singular system, non-PD matrix, failed check.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qharmony

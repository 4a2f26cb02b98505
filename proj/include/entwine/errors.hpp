#pragma once

#include <stdexcept>
#include <string>

namespace entwine {

/// Bad inputs or malformed configuration. Maps to exit code 2 in the CLI.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A solver or kernel failed numerically. Maps to exit code 3 in the CLI.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem trouble while emitting artifacts. Maps to exit code 4 in the CLI.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace entwine

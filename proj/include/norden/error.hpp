#pragma once

#include <stdexcept>
#include <string>

namespace norden {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a model file cannot be parsed or is structurally malformed.
/// `location` carries a line number or a JSON field path.
class ModelFormatError : public Error {
 public:
  ModelFormatError(const std::string& location, const std::string& message)
      : Error(location + ": " + message), location_(location) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

/// Raised when a structure violates the Norden axioms.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace norden

#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

// Validation errors map to CLI exit code 2, numerical failures to 3.
enum class ErrorCategory { Validation, Numerical };

class Error : public std::runtime_error {
 public:
  Error(std::string kind, ErrorCategory category, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)), category_(category) {}

  const std::string& kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_; }

 private:
  std::string kind_;
  ErrorCategory category_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string kind, const std::string& message)
      : Error(std::move(kind), ErrorCategory::Validation, message) {}
};

class NumericalError : public Error {
 public:
  NumericalError(std::string kind, const std::string& message)
      : Error(std::move(kind), ErrorCategory::Numerical, message) {}
};

}  // namespace blowup

#pragma once

#include <stdexcept>
#include <string>

namespace nanoradar {

/// Invalid argument or state outside an operation's domain.
class domain_error : public std::invalid_argument {
  public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Structured-config schema or physical-consistency violation.
class validation_error : public domain_error {
  public:
    explicit validation_error(const std::string& what) : domain_error(what) {}
};

/// Scene cannot be handled by any available model.
class unsupported_configuration : public domain_error {
  public:
    explicit unsupported_configuration(const std::string& what) : domain_error(what) {}
};

/// Evaluation at a resonance pole.
class pole_error : public domain_error {
  public:
    explicit pole_error(const std::string& what) : domain_error(what) {}
};

/// Convergence failure, overflow, or loss of significance at runtime.
class numerical_error : public std::runtime_error {
  public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nanoradar

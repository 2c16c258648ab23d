#pragma once

#include <stdexcept>
#include <string>

namespace randeq {

// Error taxonomy shared by every module. The CLI maps these onto exit codes.

/// Argument outside the mathematical domain of an operation (e.g. zeta(1)).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller violated a documented precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Requested work or memory exceeds a configured budget, or an exact
/// quantity does not fit the wide integer type.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad element coordinates, bad presentation file, bad
/// equation text.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Feature deliberately not synthesized (e.g. equation spaces of class >= 3).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad command line.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace randeq

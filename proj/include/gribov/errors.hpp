#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gribov {

/// Failure categories surfaced by the library. The CLI maps the first two
/// onto exit code 2 and every numerical category onto exit code 3.
enum class ErrorKind {
  InvalidArgument,
  DomainError,
  PoleCollision,
  NoConvergence,
  CountMismatch,
  StructureMismatch,
  QuadratureNotConverged,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::PoleCollision: return "PoleCollision";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::StructureMismatch: return "StructureMismatch";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
  }
  return "Unknown";
}

inline bool is_numerical_failure(ErrorKind kind) {
  return kind != ErrorKind::InvalidArgument && kind != ErrorKind::DomainError;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define GRIBOV_DEFINE_ERROR(Name)                                     \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what)                            \
        : Error(ErrorKind::Name, what) {}                             \
  };

GRIBOV_DEFINE_ERROR(InvalidArgument)
GRIBOV_DEFINE_ERROR(DomainError)
GRIBOV_DEFINE_ERROR(PoleCollision)
GRIBOV_DEFINE_ERROR(NoConvergence)
GRIBOV_DEFINE_ERROR(CountMismatch)
GRIBOV_DEFINE_ERROR(StructureMismatch)
GRIBOV_DEFINE_ERROR(QuadratureNotConverged)

#undef GRIBOV_DEFINE_ERROR

}  // namespace gribov

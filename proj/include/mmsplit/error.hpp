#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mmsplit {

enum class ErrorKind {
  DimensionMismatch,
  OffGrid,
  OffDomain,
  IndexOutOfRange,
  InvalidArgument,
  OrderTooLarge,
  BudgetExceeded,
  NotCyclicallyMonotone,
  BasePointNotInProjection,
  BasePointNotInGamma,
  ProjectionNotMonotone,
  ImproperInput,
  UndefinedOnGamma,
  InternalInconsistency,
  InversionFailure,
  NotCommuting,
  NotPositiveDefinite,
  NotSymmetric,
  NotOneDimensional,
  ParseError,
  UnknownExample,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map them to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mmsplit

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stego {

enum class ErrorKind {
  InvalidParameter,
  LengthMismatch,
  LengthNotDivisible,
  SupportMismatch,
  InsufficientTrials,
  MalformedHeader,
  TruncatedPayload,
  UnsupportedMaxval,
  DimensionMismatch,
  Validation,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Text without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace stego

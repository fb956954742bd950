#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace warpgate {

enum class ErrorKind {
  InvalidArgument,
  NonFiniteValue,
  LengthMismatch,
  NoFeasiblePath,
  EnumerationLimit,
  EmptyImage,
  DegenerateRegion,
  DegenerateTangent,
  DegenerateClasses,
  DegenerateTrainingSet,
  ProtocolPrecondition,
  InvalidHandParams,
  Io,
  Parse,
  Schema,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. `kind()` is stable and meant for
/// programmatic dispatch; `what()` carries human-readable context.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix; used when re-raising with context.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace warpgate

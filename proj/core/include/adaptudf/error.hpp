#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adaptudf {

enum class ErrorCode {
  EmptyCloud,
  DegenerateExtent,
  InvalidInput,
  ParseError,
  UnsupportedFormat,
  IoError,
  NotSymmetric,
  EmptyInput,
  NoCurvatureSamples,
  EmptyPatch,
  DegeneratePatch,
  NotCoarseVertex,
  MissingCoarseValue,
  EmptyField,
  NoArea,
  MissingNormals,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. Every failure raised by adaptudf carries a code so
/// callers (and the CLI) can branch on the kind of failure without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace adaptudf

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace codecarta {

/// Stable error categories. The CLI maps each one onto an exit code and
/// reports the identifier in its machine-readable error line.
enum class ErrorCode {
  NotFound,
  Kind,
  Parse,
  Version,
  Validation,
  Io,
  EmptyWorkspace,
  Ambiguity,
  Pattern,
  Compile,
  Name,
  Structure,
  State,
  Format,
  Parameter,
  Build,
  Usage,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  Error(ErrorCode code, std::string message, std::size_t position)
      : std::runtime_error(std::move(message)), code_(code), position_(position) {}

  ErrorCode code() const noexcept { return code_; }

  /// Byte offset, caret column or 1-based line number, depending on the code:
  /// Parse/Pattern/Compile carry an offset, Format carries a line.
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> position_;
};

}  // namespace codecarta

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vpnn {

enum class ErrorKind {
  ShapeMismatch,
  InvalidArgument,
  Parse,
  Io,
  Checksum,
  Version,
  Config,
  Divergence,
  EmptySplit,
  Degenerate,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `kind()` is stable and is what the
/// CLI prints as the structured error tag.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace vpnn

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace firmbreak {

enum class ErrorKind {
  // input errors
  Io,
  MalformedInput,
  DuplicateBin,
  NonContiguous,
  Domain,
  Range,
  InvalidSpec,
  // numerical / degenerate errors
  ZeroCount,
  Underdetermined,
  DegenerateDesign,
  NoIntersection,
  ExtrapolatedBreak,
  DegenerateFit,
  NoSolution,
  DegenerateAnchor,
  Instability,
  // unsupported option combinations
  Unsupported,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Exception thrown by every library operation. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace firmbreak

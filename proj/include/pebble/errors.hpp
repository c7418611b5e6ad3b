#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pebble {

/// Failure categories surfaced by the library. The CLI maps these to exit
/// codes and to the `ERROR:<kind>:` message prefix.
enum class ErrorKind {
  SingularMatrix,
  NonPositiveVariance,
  InvalidData,
  DegenerateResponse,
  Separation,
  TooManyFailures,
  EmptySample,
  Precondition,
  ParseError,
  NonBinaryResponse,
  MissingColumn,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace pebble

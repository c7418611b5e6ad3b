#include "pebble/errors.hpp"

namespace pebble {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorKind::InvalidData: return "InvalidData";
    case ErrorKind::DegenerateResponse: return "DegenerateResponse";
    case ErrorKind::Separation: return "Separation";
    case ErrorKind::TooManyFailures: return "TooManyFailures";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::Precondition: return "Precondition";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonBinaryResponse: return "NonBinaryResponse";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace pebble

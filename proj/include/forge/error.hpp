#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace forge {

/// Error categories surfaced to callers (and to the CLI as `error.kind`).
enum class ErrorKind {
  kValidation,
  kDimension,
  kResource,
  kParse,
  kFormat,
  kNumerical,
  kConfiguration,
  kTransport,
  kProtocol,
  kEndOfSpace,
  kIo,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define FORGE_DEFINE_ERROR(Name, Kind)                                  \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& message) : Error(Kind, message) {} \
  };

FORGE_DEFINE_ERROR(ValidationError, ErrorKind::kValidation)
FORGE_DEFINE_ERROR(DimensionError, ErrorKind::kDimension)
FORGE_DEFINE_ERROR(ResourceError, ErrorKind::kResource)
FORGE_DEFINE_ERROR(FormatError, ErrorKind::kFormat)
FORGE_DEFINE_ERROR(ConfigurationError, ErrorKind::kConfiguration)
FORGE_DEFINE_ERROR(TransportError, ErrorKind::kTransport)
FORGE_DEFINE_ERROR(ProtocolError, ErrorKind::kProtocol)
FORGE_DEFINE_ERROR(EndOfSpaceError, ErrorKind::kEndOfSpace)
FORGE_DEFINE_ERROR(IoError, ErrorKind::kIo)

#undef FORGE_DEFINE_ERROR

/// Parse failure tied to a 1-based input line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorKind::kParse,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Non-finite energy during training; carries the epoch it appeared in.
class NumericalError : public Error {
 public:
  NumericalError(std::size_t epoch, const std::string& message)
      : Error(ErrorKind::kNumerical,
              "epoch " + std::to_string(epoch) + ": " + message),
        epoch_(epoch) {}

  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

}  // namespace forge

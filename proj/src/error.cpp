#include "forge/error.hpp"

namespace forge {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation:
      return "validation";
    case ErrorKind::kDimension:
      return "dimension";
    case ErrorKind::kResource:
      return "resource";
    case ErrorKind::kParse:
      return "parse";
    case ErrorKind::kFormat:
      return "format";
    case ErrorKind::kNumerical:
      return "numerical";
    case ErrorKind::kConfiguration:
      return "configuration";
    case ErrorKind::kTransport:
      return "transport";
    case ErrorKind::kProtocol:
      return "protocol";
    case ErrorKind::kEndOfSpace:
      return "end-of-space";
    case ErrorKind::kIo:
      return "io";
  }
  return "unknown";
}

}  // namespace forge

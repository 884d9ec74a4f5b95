#include "hfol/error.hpp"

namespace hfol {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
      return "usage";
    case ErrorKind::kParse:
      return "parse";
    case ErrorKind::kType:
      return "type";
    case ErrorKind::kSizeGuard:
      return "size_guard";
    case ErrorKind::kVerification:
      return "verification";
    case ErrorKind::kIo:
      return "io";
  }
  return "unknown";
}

void throw_usage(const std::string& message) {
  throw Error(ErrorKind::kUsage, message);
}

void throw_parse(const std::string& message) { throw ParseError(message); }

}  // namespace hfol

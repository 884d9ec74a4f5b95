#pragma once

#include <stdexcept>
#include <string>

namespace hfol {

// Error classes map one-to-one onto the C API status codes and the CLI exit
// codes.
enum class ErrorKind {
  kUsage,
  kParse,      // lexing, grammar, unknown symbols, sort mismatches
  kType,       // deduction typing errors
  kSizeGuard,  // a fiber exceeded the configured bound
  kVerification,
  kIo,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset = npos)
      : Error(ErrorKind::kParse, message), offset_(offset) {}
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  // Byte offset into the parsed text, or npos when not positional.
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class TypeError : public Error {
 public:
  explicit TypeError(const std::string& message)
      : Error(ErrorKind::kType, message) {}
};

class SizeGuardError : public Error {
 public:
  explicit SizeGuardError(const std::string& message)
      : Error(ErrorKind::kSizeGuard, message) {}
};

[[noreturn]] void throw_usage(const std::string& message);
[[noreturn]] void throw_parse(const std::string& message);

}  // namespace hfol

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace supply_audit {

enum class ErrorKind {
  Io,
  EmptyName,
  InvalidName,
  MalformedVersion,
  MalformedSpecifier,
  MalformedRecord,
  DuplicatePackage,
  UnknownPackage,
  UnknownMaintainer,
  NotADependent,
  NoFixDate,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (and the CLI
// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0);

  ErrorKind kind() const noexcept { return kind_; }
  // 1-based input line for record errors, 0 otherwise.
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  std::size_t line_;
};

}  // namespace supply_audit

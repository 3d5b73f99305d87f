#include "supply_audit/error.hpp"

namespace supply_audit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return "Io";
    case ErrorKind::EmptyName: return "EmptyName";
    case ErrorKind::InvalidName: return "InvalidName";
    case ErrorKind::MalformedVersion: return "MalformedVersion";
    case ErrorKind::MalformedSpecifier: return "MalformedSpecifier";
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::DuplicatePackage: return "DuplicatePackage";
    case ErrorKind::UnknownPackage: return "UnknownPackage";
    case ErrorKind::UnknownMaintainer: return "UnknownMaintainer";
    case ErrorKind::NotADependent: return "NotADependent";
    case ErrorKind::NoFixDate: return "NoFixDate";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::size_t line)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), line_(line) {}

}  // namespace supply_audit

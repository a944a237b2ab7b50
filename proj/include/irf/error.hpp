#pragma once

#include <stdexcept>
#include <string>

namespace irf {

enum class ErrorKind {
  InvalidArgument,
  Domain,
  Precision,
  NotFound,
  LemmaViolation,
  Structural,
  Overflow,
};

// Every failure raised by the core carries one of the kinds above; the C API
// maps them one-to-one onto status codes.
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

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Precision: return "precision";
    case ErrorKind::NotFound: return "not-found";
    case ErrorKind::LemmaViolation: return "lemma-violation";
    case ErrorKind::Structural: return "structural";
    case ErrorKind::Overflow: return "overflow";
  }
  return "unknown";
}

}  // namespace irf

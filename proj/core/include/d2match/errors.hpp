#pragma once

#include <stdexcept>
#include <string>

namespace d2match {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or invariant-violating instance input.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

/// A state-space or resource guard of an exact engine was exceeded.
class GuardExceeded : public Error {
 public:
  explicit GuardExceeded(const std::string& what) : Error(what) {}
};

/// A primal-dual certificate assertion failed. This is a disproof signal,
/// not a recoverable condition; the message carries the arrival trace.
class CertificateViolation : public Error {
 public:
  explicit CertificateViolation(const std::string& what) : Error(what) {}
};

/// An eta-linear sign query could not be decided at the maximum
/// refinement depth of the certified eta enclosure.
class UndecidableComparison : public Error {
 public:
  explicit UndecidableComparison(const std::string& what) : Error(what) {}
};

}  // namespace d2match

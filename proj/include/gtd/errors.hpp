#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gtd {

/// %g text of a double, for messages.
std::string format_g(double x);

enum class ErrorKind {
  DomainViolation,
  NonFinite,
  ParseError,
  UnknownIdentifier,
  UnboundParameter,
  SingularPrefactor,
  DegenerateMetric,
  InversionFailure,
  PreconditionFailure,
  SingularDenominator,
  EmptyGrid,
  InvalidArgument,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the engine. The kind is what callers
/// (and the CLI exit-code mapping) switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainViolation : public Error {
 public:
  explicit DomainViolation(std::vector<std::string> violated);
  DomainViolation(const std::string& what, std::vector<std::string> violated);

  const std::vector<std::string>& violated() const noexcept { return violated_; }

 private:
  std::vector<std::string> violated_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::vector<std::string> expected,
             const std::string& found);

  std::size_t position() const noexcept { return position_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
  std::string found_;
};

class InversionFailure : public Error {
 public:
  /// `witness` holds the sample coordinates where monotonicity broke, or is
  /// empty when the failure came from the Newton iteration itself.
  InversionFailure(const std::string& what, std::vector<double> witness = {})
      : Error(ErrorKind::InversionFailure, what), witness_(std::move(witness)) {}

  const std::vector<double>& witness() const noexcept { return witness_; }

 private:
  std::vector<double> witness_;
};

}  // namespace gtd

#include "gtd/errors.hpp"

#include <cstdio>

namespace gtd {

std::string format_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::UnboundParameter: return "UnboundParameter";
    case ErrorKind::SingularPrefactor: return "SingularPrefactor";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::InversionFailure: return "InversionFailure";
    case ErrorKind::PreconditionFailure: return "PreconditionFailure";
    case ErrorKind::SingularDenominator: return "SingularDenominator";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ", ";
    out += item;
  }
  return out;
}

}  // namespace

DomainViolation::DomainViolation(std::vector<std::string> violated)
    : Error(ErrorKind::DomainViolation, "domain violation: " + join(violated)),
      violated_(std::move(violated)) {}

DomainViolation::DomainViolation(const std::string& what,
                                 std::vector<std::string> violated)
    : Error(ErrorKind::DomainViolation, what), violated_(std::move(violated)) {}

ParseError::ParseError(std::size_t position, std::vector<std::string> expected,
                       const std::string& found)
    : Error(ErrorKind::ParseError,
            "parse error at position " + std::to_string(position) + ": expected " +
                join(expected) + ", found " + found),
      position_(position),
      expected_(std::move(expected)),
      found_(found) {}

}  // namespace gtd

#pragma once

#include <stdexcept>
#include <string>

namespace magpulse {

// Bad input geometry or configuration (missing field, invalid quadrature, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation outside an operation's mathematical domain: singular points,
// points inside a source, zero-variance data.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace magpulse

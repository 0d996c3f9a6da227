#pragma once

#include <stdexcept>
#include <string>

namespace subpois {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Polynomial degree beyond the exact-integer Stirling table.
class UnsupportedDegree : public std::out_of_range {
 public:
  explicit UnsupportedDegree(const std::string& what) : std::out_of_range(what) {}
};

/// Operation does not apply to the given configuration (e.g. a hitting
/// time requested for a non-integer jump law).
class WrongOperation : public std::logic_error {
 public:
  explicit WrongOperation(const std::string& what) : std::logic_error(what) {}
};

/// Density requested for a law without an absolutely continuous part.
class NoDensity : public std::logic_error {
 public:
  explicit NoDensity(const std::string& what) : std::logic_error(what) {}
};

}  // namespace subpois

#pragma once

#include <stdexcept>
#include <string>

namespace dyadic {

/// Input violates a documented precondition (bad measures, out-of-range
/// parameters, mismatched tree/function pairs).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a scalar function such as H_p or omega_p.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computed postcondition failed its self-check.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

[[noreturn]] inline void fail_precondition(const std::string& what) {
  throw PreconditionError(what);
}

inline void require(bool ok, const std::string& what) {
  if (!ok) fail_precondition(what);
}

}  // namespace detail
}  // namespace dyadic

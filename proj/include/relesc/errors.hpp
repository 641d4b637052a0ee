#pragma once

#include <stdexcept>
#include <string>

namespace relesc {

// Caller passed arguments that violate an operation's preconditions
// (mismatched arity, singular matrix, det != 1, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well-formed but lies outside the domain where the quantity is
// defined (e.g. a divisor containing the hyperplane at infinity).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exact computation refused because a coefficient outgrew the bit budget.
class BudgetExceeded : public DomainError {
 public:
  using DomainError::DomainError;
};

// An internal exactness assertion failed. Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace relesc

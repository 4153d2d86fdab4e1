#pragma once

#include <stdexcept>
#include <string>

namespace orlint {

/// An argument lies outside the evaluation domain of an Orlicz function.
class DomainOverflow : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative solver exhausted its iteration budget.
class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A user-supplied spec (JSON/CSV/scenario) could not be resolved.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace orlint

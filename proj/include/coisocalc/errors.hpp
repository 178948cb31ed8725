#pragma once

#include <stdexcept>

namespace coisocalc {

/// Raised when a precondition on the mathematical data fails (wrong degree, not Poisson, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace coisocalc

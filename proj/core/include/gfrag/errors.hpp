#pragma once

#include <stdexcept>
#include <string>

namespace gfrag {

/// A precondition on the inputs of an operation was violated (bad domain,
/// unsupported profile family, invalid parameters).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical safeguard tripped: truncation cap reached, quadrature error
/// estimate too large, or mass leaking through a grid boundary.
class NumericalGuardError : public std::runtime_error {
 public:
  explicit NumericalGuardError(const std::string& what, double bound = 0.0)
      : std::runtime_error(what), bound_(bound) {}

  /// Achieved error bound (or leaked mass) at the point of failure.
  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

}  // namespace gfrag

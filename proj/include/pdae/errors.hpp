#pragma once

#include <stdexcept>
#include <string>

namespace pdae {

/// Two objects that must live on the same grid (or have matching sizes) do not.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the domain of the operation (negative time, bad radius, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input data is unusable, e.g. non-finite samples.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A factorization or eigensolve failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time step produced non-finite values. Integrators treat this as blow-up evidence.
class OverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pdae

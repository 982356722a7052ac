#pragma once

#include <stdexcept>
#include <string>

namespace betageo {

// Invalid arguments: non-positive shapes, non-finite values, sequences
// outside the moment space, mismatched lengths.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A moment sequence that is not in the interior of its moment space.
class MomentSpaceError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Failures of an iterative or adaptive numerical scheme.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A geodesic left the numerically representable part of the chart
// (a shape parameter dropped to the floor or blew up).
class BoundaryEscape : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace betageo

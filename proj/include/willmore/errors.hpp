#pragma once

#include <stdexcept>
#include <string>

namespace willmore {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input failed a structural check (asymmetric matrix, shape mismatch, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Jacobian of the immersion has rank < n at the evaluation point.
class SingularImmersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A grid stencil would read outside a non-periodic axis.
class StencilError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A hypothesis of the formula (criticality, transversal harmonicity) is violated.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Functional kind does not match the surface it is applied to.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace willmore

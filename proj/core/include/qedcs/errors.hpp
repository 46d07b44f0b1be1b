#pragma once

#include <stdexcept>
#include <string>

namespace qedcs {

// Argument lies on or beyond a branch cut, or outside the admissible set of a kernel.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// An adaptive quadrature or iterative procedure missed its tolerance.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid experiment configuration or inconsistent numerical setup.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Two operators that must share a grid do not.
class GridMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Matrix passed to the unitary exponential is not skew-adjoint to tolerance.
class NotSkewAdjoint : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Least-squares fit requested on degenerate data.
class FitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace qedcs

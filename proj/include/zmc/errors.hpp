#pragma once

#include <stdexcept>
#include <string>

namespace zmc {

// Root of the library's exception hierarchy. Every failure a caller can act on
// derives from this, so tools can map it to an exit code in one place.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Point or parameter outside the set where an operation is defined.
class DomainError : public Error {
public:
  using Error::Error;
};

// Stencil would read past the edge of a grid.
class BoundaryError : public Error {
public:
  using Error::Error;
};

class NonFiniteError : public Error {
public:
  using Error::Error;
};

// Too few inputs (fit points, lambda values, ...).
class ArityError : public Error {
public:
  using Error::Error;
};

// Evaluation at a coordinate singularity such as r = 0 or rho = 0.
class SingularPointError : public Error {
public:
  using Error::Error;
};

// The discriminant 1 - u_t^2 + |grad u|^2 (or the profile gap) fell below the
// degeneracy threshold.
class DegeneracyError : public Error {
public:
  using Error::Error;
};

// Field violates the even-parity requirement at the symmetry axis.
class RegularityError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

}  // namespace zmc

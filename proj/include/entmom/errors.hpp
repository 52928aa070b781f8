#pragma once

#include <stdexcept>
#include <string>

namespace entmom {

// Base for everything the library throws on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incompatible matrix shapes or subsystem structure.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Bad argument values (index sets, counts, non-isometries, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Parameter outside a family's admissible domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A numerically impossible situation that should not be clamped away.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A state invariant failed. `invariant()` is one of "finite", "hermiticity",
// "trace", "positivity", "norm"; `margin()` is how far past tolerance it was.
class ValidationError : public Error {
 public:
  ValidationError(std::string invariant, double deviation, double tol)
      : Error(invariant + " violated: deviation " + std::to_string(deviation) +
              " exceeds tolerance " + std::to_string(tol)),
        invariant_(std::move(invariant)),
        deviation_(deviation),
        tol_(tol) {}

  const std::string& invariant() const noexcept { return invariant_; }
  double deviation() const noexcept { return deviation_; }
  double margin() const noexcept { return deviation_ - tol_; }

 private:
  std::string invariant_;
  double deviation_;
  double tol_;
};

}  // namespace entmom

#pragma once

#include <stdexcept>
#include <string>

namespace gbsmock {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Mismatched sizes: wrong matrix shape, odd doubled dimension, unequal vectors.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Argument outside the mathematical domain (negative squeezing, q(z) = 0, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Out-of-range or duplicate mode index.
class IndexError : public Error {
  public:
    using Error::Error;
};

/// A covariance matrix or factorization violates a physicality invariant.
class ConditioningError : public Error {
  public:
    using Error::Error;
};

/// Requested work exceeds a configured budget (click count, subset size, 2^n memory).
class BudgetError : public Error {
  public:
    using Error::Error;
};

/// An iterative solver did not reach its tolerance.
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

/// Malformed input file. `line` is 1-based, 0 when not line oriented.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// Not enough samples to satisfy a request (e.g. a click-number sector).
class ShortfallError : public Error {
  public:
    using Error::Error;
};

}  // namespace gbsmock

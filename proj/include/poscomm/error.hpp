#pragma once

#include <stdexcept>
#include <string>

namespace poscomm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// NaN or infinity produced by an arithmetic step.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A sequence or operator was evaluated outside the indices it is tabulated on.
class WindowError : public Error {
 public:
  using Error::Error;
};

/// A denominator (U_{n-1}+U_n, Q_n(z), gamma_n-gamma_{n+1}, ...) fell below its threshold.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Data that should satisfy an identity does not (failed exact division, bad seed).
class InconsistentDataError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the domain of a construction (genus 0, a2 = 0, lattice hit, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Iterative solve did not reach its residual target.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace poscomm

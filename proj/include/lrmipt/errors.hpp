#pragma once

#include <stdexcept>
#include <string>

namespace lrmipt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// argument outside the documented domain (includes poles and branch points)
struct DomainError : Error {
  using Error::Error;
};

// 2α ≤ 1: sums over the chain diverge
struct DivergenceError : DomainError {
  using DomainError::DomainError;
};

// Ĵ_k ≤ 0 somewhere, kernel cannot be inverted
struct StabilityError : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

struct PhaseError : Error {
  using Error::Error;
};

struct NormError : Error {
  using Error::Error;
};

struct ResourceError : Error {
  using Error::Error;
};

}  // namespace lrmipt

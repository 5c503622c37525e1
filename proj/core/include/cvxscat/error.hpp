#pragma once

#include <stdexcept>
#include <string>

namespace cvxscat {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation (e.g. k <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inputs are individually valid but inconsistent with each other
/// (mismatched grids, nonzero boundary columns, wrong shapes).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A linear solve or iteration broke down (singular matrix, NaN cost).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Measured or simulated data cannot be used (|g| ~ 0, |u| ~ 0).
class DegenerateData : public Error {
 public:
  using Error::Error;
};

/// The generator Gram matrix is too ill-conditioned to orthonormalize.
class BasisConstructionError : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvxscat

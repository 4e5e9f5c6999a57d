#pragma once

#include <stdexcept>
#include <string>

namespace mortkit {

/// Base class for all mortkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad cells, shape mismatches,
/// invalid configuration). CLI exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure (degenerate input, non-convergence, domain errors
/// inside the math). CLI exit code 2.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Filesystem problems (missing files, unwritable output). CLI exit code 3.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mortkit

// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace nrep {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent caller input (CLI exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public InputError {
 public:
  using InputError::InputError;
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& message)
      : InputError("line " + std::to_string(line) + ": " + message), line_(line) {}

  [[nodiscard]] int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A Pauli term acting on more than two qubits.
class WeightViolation : public InputError {
 public:
  using InputError::InputError;
};

/// A sector or simulation exceeded its configured size cap (CLI exit code 3).
class CapacityError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class NonHermitianError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RankDeficiencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Raised when a separating hyperplane is requested for a point inside K.
class PointInsideError : public Error {
 public:
  using Error::Error;
};

}  // namespace nrep

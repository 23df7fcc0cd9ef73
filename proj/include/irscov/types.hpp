#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace irscov {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Input that violates an operation's contract. The CLI maps these to exit 1.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Numerical failure while running a well-formed request. CLI exit 2.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NonHermitianInput : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class BadLength : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class DimensionMismatch : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class InvalidProfile : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class PadError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class EmptyConditionCell : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class SingularCore : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class NonFiniteIterate : public NumericalError {
public:
  using NumericalError::NumericalError;
};

} // namespace irscov

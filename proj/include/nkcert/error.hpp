#pragma once

#include <stdexcept>
#include <string>

namespace nkcert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments or violated construction invariants.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A pivot fell below the relative threshold during LU factorization.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature hit its recursion limit.
class NonConvergedQuadrature : public Error {
 public:
  using Error::Error;
};

/// A point left the closed ball of radius R around the starting point.
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class UnknownProblem : public Error {
 public:
  using Error::Error;
};

/// A tabulated modulus was evaluated past its last knot.
class BeyondTabulatedRange : public Error {
 public:
  using Error::Error;
};

/// omega0(s) reached 1 so gamma(s) = 1 / (1 - omega0(s)) is undefined.
class ModulusSaturated : public Error {
 public:
  using Error::Error;
};

/// A certified run was requested without a passing certificate.
class NotCertified : public Error {
 public:
  using Error::Error;
};

/// Problem, modulus or expression text could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace nkcert

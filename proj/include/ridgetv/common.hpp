#pragma once

#include <stdexcept>
#include <string>

namespace ridgetv {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatch, bad order, empty grid, ...
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A grid does not cover the support of the sampled function.
class ExtentError : public Error {
 public:
  using Error::Error;
};

/// A profile lacks the vanishing moments an operator needs.
class MomentError : public Error {
 public:
  using Error::Error;
};

class ParityError : public Error {
 public:
  using Error::Error;
};

/// Symmetrization annihilated a test function.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Box truncation of a weak pairing is not certified.
class TruncationError : public Error {
 public:
  using Error::Error;
};

class PolynomialCheckError : public Error {
 public:
  using Error::Error;
};

enum class Parity { Even, Odd, None };

inline const char* to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::None: return "none";
  }
  return "none";
}

/// Every numerical tolerance used by the library, in one record.
struct Tolerances {
  double unit_norm = 1e-12;   // |n| - 1 for UnitVector
  double merge = 1e-10;       // atom coincidence on the cylinder
  double tail = 1e-9;         // relative profile magnitude at the grid edge
  double moment = 1e-7;       // normalized vanishing-moment residual
  double polynomial = 1e-8;   // relative least-squares residual
  double truncation = 0.1;    // box tail bound relative to the pairing
};

}  // namespace ridgetv

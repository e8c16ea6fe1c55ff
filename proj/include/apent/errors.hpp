#pragma once

#include <stdexcept>
#include <string>

namespace apent {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Letter outside ±{1..rank}, or malformed word input.
struct InvalidLetterError : Error {
  using Error::Error;
};

// Two operands live over free groups of different rank.
struct RankMismatchError : Error {
  using Error::Error;
};

// The candidate element is not an exterior boundary point of the grounded set.
struct NotAnEnlargementError : Error {
  using Error::Error;
};

// A set of words fails the grounded-set requirements (identity + connectivity).
struct NotGroundedError : Error {
  using Error::Error;
};

// A matrix expected to be positive semidefinite has a genuinely negative eigenvalue.
struct NotPsdError : Error {
  using Error::Error;
};

// A pivot block that must be invertible is singular under the scale-relative tolerance.
struct SingularMatrixError : Error {
  using Error::Error;
};

// Matrix/block dimensions do not match what an operation requires.
struct ShapeError : Error {
  using Error::Error;
};

// A partial positive definite function restriction became singular while walking
// an enumeration; `step` is the index of the failing enlargement.
struct SingularPrefixError : Error {
  explicit SingularPrefixError(int step_, const std::string& what_)
      : Error(what_), step(step_) {}
  int step;
};

// Entries forced by translation symmetry disagree beyond tolerance.
struct ConsistencyError : Error {
  using Error::Error;
};

// A generator description of a positive definite function is malformed.
struct InvalidSpecError : Error {
  using Error::Error;
};

}  // namespace apent

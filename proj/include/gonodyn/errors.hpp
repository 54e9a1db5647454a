#pragma once

#include <stdexcept>
#include <string>

namespace gonodyn {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Female egg fraction a fell outside (0,1); the slice dynamics need both sexes.
class DegenerateRate final : public Error {
 public:
  using Error::Error;
};

// A state handed to the full operator has zero total mass in one sex.
class ZeroSexMass final : public Error {
 public:
  using Error::Error;
};

// A state claimed to lie on the slice {sum x = a} does not, beyond tolerance.
class NotInSa final : public Error {
 public:
  using Error::Error;
};

// Construction-time invariant violation of a parameter or state type.
class InvalidState final : public Error {
 public:
  using Error::Error;
};

// C1 builder: mass placed on an offspring type outside {mother, father}.
class BadPattern final : public Error {
 public:
  using Error::Error;
};

// C1 builder: a coefficient equal to 1/2 (excluded by the class definition).
class HalfForbidden final : public Error {
 public:
  using Error::Error;
};

// C2 builder: partition boundary m outside [2, n-1].
class BadPartition final : public Error {
 public:
  using Error::Error;
};

// A tensor row violates nonnegativity or does not sum to one.
class NotStochastic final : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange final : public Error {
 public:
  using Error::Error;
};

// Stability classification was requested at a point that is not fixed.
class NotAFixedPoint final : public Error {
 public:
  using Error::Error;
};

class UnknownClaim final : public Error {
 public:
  using Error::Error;
};

}  // namespace gonodyn

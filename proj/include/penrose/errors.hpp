#pragma once

#include <stdexcept>
#include <string>

namespace penrose {

// Base class for every error raised by the library. Each subclass names one
// failure mode so that callers (the CLI in particular) can map it to an exit
// code without parsing messages.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A radius (or other argument) lies outside the domain of the profile.
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

// The conformal factor does not fit a + b r^{2-n} at infinity.
class NotAsymptoticallyFlat : public Error {
 public:
  using Error::Error;
};

class NotOuterMinimizing : public Error {
 public:
  using Error::Error;
};

// Argument of h_{eps,beta} at or below -4 beta / (3 eps).
class BarrierError : public Error {
 public:
  using Error::Error;
};

// A candidate region that is not contained in the anchor ball.
class OutOfCollection : public Error {
 public:
  using Error::Error;
};

// The functional attains its minimum on the barrier side of the search
// interval; beta is too small for this epsilon.
class DegenerateMinimizer : public Error {
 public:
  using Error::Error;
};

class EpsilonTooLarge : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed profile tables, configs and other user input.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace penrose

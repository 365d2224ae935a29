#pragma once

#include <stdexcept>
#include <string>

namespace nptsub {

// Every library failure derives from Error so callers (the CLI in
// particular) can map categories onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class BadRank : public Error {
 public:
  using Error::Error;
};

class NotInSubspace : public Error {
 public:
  using Error::Error;
};

// Raised only if the witness search finds nothing, which the construction
// rules out for any nonzero state in the subspace.
class NoWitness : public Error {
 public:
  using Error::Error;
};

class NotInDualCone : public Error {
 public:
  using Error::Error;
};

class DegenerateSubspace : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent matrix file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace nptsub

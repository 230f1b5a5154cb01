#pragma once

#include <stdexcept>
#include <string>

namespace qcoin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Stationary distribution is not unique (l = m = 1).
class ReducibleChain : public Error {
 public:
  using Error::Error;
};

class StepCountTooLarge : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonPhysicalState : public Error {
 public:
  using Error::Error;
};

class EmptyBin : public Error {
 public:
  using Error::Error;
};

class FitDidNotConverge : public Error {
 public:
  using Error::Error;
};

// A consistency check inside the library failed (e.g. unexpected complex residue).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcoin

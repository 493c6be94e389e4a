#pragma once

#include <stdexcept>
#include <string>

namespace mixkit {

// Every library failure derives from Error; the CLI maps the subclass onto
// its exit code (2 invalid input, 3 horizon/precondition, 4 numerical).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class HorizonTooSmall : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class InsufficientSegment : public PreconditionError {
 public:
  InsufficientSegment(const std::string& what, long required_back, long required_fwd)
      : PreconditionError(what), required_back_(required_back), required_fwd_(required_fwd) {}

  // Minimum segment extents (points before / after q) needed to proceed.
  long required_back() const noexcept { return required_back_; }
  long required_fwd() const noexcept { return required_fwd_; }

 private:
  long required_back_;
  long required_fwd_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace mixkit

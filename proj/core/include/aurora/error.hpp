#pragma once

#include <stdexcept>
#include <string>

namespace aurora {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument or configuration was violated.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Fewer than three fiducials, or a singular fit.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// Two lights whose diffuse weights are too close to separate reflection
/// from ambient; the captcha must be re-issued.
class DegeneratePairError : public Error {
 public:
  using Error::Error;
};

/// Loss became non-finite during training.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, int epoch) : Error(what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

/// Filesystem failure or a corrupted / truncated container.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace aurora

#pragma once

#include <stdexcept>
#include <string>

namespace wnv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model parameters violate an invariant.
class ParamError : public Error {
 public:
  using Error::Error;
};

/// Kernel shape parameter or kernel pairing is not admissible.
class KernelError : public Error {
 public:
  using Error::Error;
};

/// Two distinct kernels were supplied where a single shared kernel is required.
class KernelMismatchError : public KernelError {
 public:
  using KernelError::KernelError;
};

/// Iteration failed to converge, or a root could not be selected.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Time step exceeds the positivity bound of the explicit scheme.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Output files could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wnv

#pragma once

#include <stdexcept>
#include <string>

namespace crossq {

/// Base class for every error raised by the library. The CLI maps each
/// subclass to a stable process exit code.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration: out-of-range sizes, unknown config fields, bad presets.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Caller misuse: index out of range, shape mismatch.
class UsageError : public Error {
  public:
    using Error::Error;
};

/// Malformed or inconsistent input data.
class DataError : public Error {
  public:
    using Error::Error;
};

/// Numerical failure: singular systems, non-finite losses.
class NumericalError : public Error {
  public:
    using Error::Error;
};

} // namespace crossq

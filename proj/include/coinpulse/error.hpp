#pragma once

#include <stdexcept>
#include <string>

namespace coinpulse {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable input (files, config values, series shapes).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine was called outside its domain or hit a degenerate case.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace coinpulse

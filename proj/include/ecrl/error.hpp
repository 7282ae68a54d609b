#pragma once

#include <stdexcept>
#include <string>

namespace ecrl {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for inconsistent configuration detected before any work starts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ecrl

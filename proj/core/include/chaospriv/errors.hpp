#pragma once

#include <stdexcept>
#include <string>

namespace chaospriv {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed inputs: bad probabilities, mismatched alphabets, bad configs.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// File and stream failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// A trajectory left the representable range (NaN or infinity in the state).
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double t) : Error(what), time(t) {}
  double time;
};

}  // namespace chaospriv

#pragma once

#include <stdexcept>
#include <string>

namespace oddic {

/// Invalid argument to a library operation (out-of-range degree, bad node index, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or invalid configuration / fixture file. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulation produced or received a non-finite state. The CLI maps this to exit code 3.
class NonFiniteStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive robustness enumeration refused because the graph is too large.
class InfeasibleCheckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output files could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oddic

#pragma once

#include <stdexcept>
#include <string>

namespace rankbandit {

// Bad arguments (dimension mismatch, out-of-range position, ...) are reported
// with std::invalid_argument. The types below cover the remaining failure
// classes; the CLI maps ConfigError to exit code 1 and NumericError to 2.

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rankbandit

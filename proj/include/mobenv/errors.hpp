#pragma once

#include <stdexcept>
#include <string>

namespace mobenv {

// Raised for malformed arguments to pure functions (negative SNR, NaN coordinates, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidAction : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Stepping a finished or never-reset environment.
class LifecycleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mobenv

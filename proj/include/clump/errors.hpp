#pragma once

#include <stdexcept>

namespace clump {

// Error categories mirror the CLI exit codes: bad configuration, malformed
// or insufficient data, filesystem failures, failed post-run validation.

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace clump

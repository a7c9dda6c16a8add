#pragma once

#include <stdexcept>

namespace cntpuf {

// Invalid configuration or violated precondition (bad mix, bad scheme,
// out-of-range selection, ...). The message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File read/write failure; the message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cntpuf

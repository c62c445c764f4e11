// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace cdma {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Filesystem and stream failures: missing file, unreadable path, short write.
class IoError : public Error {
public:
  using Error::Error;
};

// Encoded data that does not parse: bad magic, truncated payload, trailing
// garbage, inconsistent lengths.
class CorruptStreamError : public Error {
public:
  using Error::Error;
};

// Invalid configuration or argument values.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace cdma

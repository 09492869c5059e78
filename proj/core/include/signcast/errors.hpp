#pragma once

#include <stdexcept>
#include <string>

namespace signcast {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unsupported or inconsistent configuration (unknown curve profile, empty
// validator set, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed, non-canonical or out-of-group bytes.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// Caller passed a value that violates an operation's precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Elements from different curve profiles were combined.
class GroupMismatchError : public Error {
 public:
  using Error::Error;
};

// A lookup key (pseudo identity, block index, ...) does not exist.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace signcast

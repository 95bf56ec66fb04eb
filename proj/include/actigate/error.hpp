#pragma once

#include <stdexcept>
#include <string>

namespace actigate {

// Bad configuration supplied by the caller (CLI exit code 2).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Unreadable or malformed input data (CLI exit code 3).
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A broken internal invariant or precondition (CLI exit code 4).
class InvariantError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace actigate

#pragma once

#include <stdexcept>
#include <string>

namespace mtssel {

// Bad user input: malformed files, invalid values, impossible parameters.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public InputError {
public:
  using InputError::InputError;
};

// An internal invariant was violated (e.g. the solver objective increased).
class ConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace mtssel

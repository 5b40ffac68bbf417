#pragma once

#include <stdexcept>
#include <string>

namespace pspec {

/// Bad user input: malformed graph file, unknown builtin, invalid parameter.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured work cap (walk enumeration, gauge search) would be exceeded.
class CapExceeded : public InputError {
public:
    using InputError::InputError;
};

/// Two computations that must agree do not. Always a bug, never bad input.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace pspec

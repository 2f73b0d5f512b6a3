#pragma once

#include <stdexcept>
#include <string>

namespace fastperm {

// Input violates a size precondition (n = 0, k out of range, empty group).
class InvalidSizeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Two operands disagree on length.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NonFiniteError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The statistic is undefined for the input (constant vector, all-equal groups).
class DegenerateInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A cost guard refused the request (enumeration cap, batch cap).
class CapExceededError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An exact self-check failed; indicates a bug, never bad input.
class InternalConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace fastperm

#pragma once

#include <stdexcept>
#include <string>

namespace moea {

// A caller supplied an argument outside the operation's domain.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Data handed to an operation is malformed (non-finite values and the like).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A run or experiment configuration failed validation.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Normalization could not produce a positive denominator for some objective.
class DegeneratePopulation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace moea

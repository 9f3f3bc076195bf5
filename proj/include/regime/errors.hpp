#pragma once

#include <stdexcept>
#include <string>

namespace regime {

// Malformed or unreadable input data (CLI exit code 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameter or configuration value (CLI exit code 3).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The statistical pipeline cannot produce a result, e.g. too few
// completed durations (CLI exit code 1).
class PipelineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace regime

#pragma once

#include <stdexcept>

namespace tilediff {

// Invalid configuration or argument combination detected before/while wiring
// a run. The CLI maps these to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Non-finite values or other numerical failure detected mid-run. The CLI maps
// these to exit code 3.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tilediff

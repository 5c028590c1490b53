#pragma once

#include <stdexcept>
#include <string>

namespace invsub {

// Bad user input: invalid model parameters, out-of-range queries, unsupported
// caps. The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Runtime numerical failure: non-finite transform values on a contour,
// exhausted simulation horizon, broken grid. The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// A simulated path never exceeded the queried level within its horizon;
// callers may retry with a longer horizon.
class HorizonError : public NumericError {
public:
    explicit HorizonError(const std::string& msg) : NumericError(msg) {}
};

}  // namespace invsub

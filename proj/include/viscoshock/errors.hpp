#pragma once

#include <stdexcept>
#include <string>

namespace viscoshock {

// Bad input: out-of-domain arguments, violated preconditions, config typos.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Integration or time-stepping failure (step underflow, loss of positivity).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace viscoshock

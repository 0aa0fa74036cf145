#pragma once

#include <stdexcept>
#include <string>

namespace lvpqa {

/// Invalid parameters or malformed configuration. CLI exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A state left its physical domain (trace drift, negativity, underflow).
/// CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reading or writing a file failed. CLI exit code 4.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lvpqa

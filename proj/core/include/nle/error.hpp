#pragma once

#include <stdexcept>
#include <string>

namespace nle {

/// Invalid or inconsistent experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition of an operation.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Explicit step exceeds the monotone CFL limit.
class StepSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requested computation exceeds its step budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedDimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace nle

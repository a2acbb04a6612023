#pragma once

#include <stdexcept>
#include <string>

namespace windcast {

inline constexpr const char* kVersion = "0.1.0";

/// Bad arguments, malformed files, shape mismatches. CLI exit code 2.
class InvalidInput : public std::runtime_error {
public:
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

/// Base for runtime numerical failures. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Linear system too ill-conditioned to trust; carries the condition estimate.
class ConditioningError : public NumericalError {
public:
    ConditioningError(const std::string& what, double estimate)
        : NumericalError(what), condition_estimate(estimate) {}
    double condition_estimate;
};

/// Metric asked of data it is undefined on (zero-variance actual, ...).
class DegenerateInput : public NumericalError {
public:
    explicit DegenerateInput(const std::string& what) : NumericalError(what) {}
};

} // namespace windcast

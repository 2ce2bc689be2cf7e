#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blockboot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live on different grids or weightings.
class DomainMismatchError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

/// Invalid process, experiment, or command-line configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A BlockPlan that does not describe the sample it is applied to.
class PlanMismatchError : public Error {
public:
    using Error::Error;
};

class LengthMismatchError : public Error {
public:
    using Error::Error;
};

class UnsupportedStatisticError : public Error {
public:
    using Error::Error;
};

class InsufficientSampleError : public Error {
public:
    using Error::Error;
};

/// Invalid goodness-of-fit specification (non-monotone CDF, bad weights).
class SpecError : public Error {
public:
    using Error::Error;
};

/// Wraps an error raised while evaluating bootstrap replicate `replicate()`.
class ReplicateError : public Error {
public:
    ReplicateError(std::size_t replicate, const std::string& what)
        : Error("replicate " + std::to_string(replicate) + ": " + what), replicate_(replicate) {}

    [[nodiscard]] std::size_t replicate() const noexcept { return replicate_; }

private:
    std::size_t replicate_;
};

}  // namespace blockboot

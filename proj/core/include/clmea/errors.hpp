#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace clmea {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition was not met by the caller.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// A surrogate could not be trained (duplicate centers, singular kernel system, ...).
class FitError : public Error {
public:
    using Error::Error;
};

class UnsupportedDimension : public Error {
public:
    using Error::Error;
};

class UnsupportedProblem : public Error {
public:
    using Error::Error;
};

/// Failure while obtaining a real objective evaluation. Carries the ordinal of
/// the function evaluation that was being attempted.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, std::int64_t fe_index)
        : Error(what + " (fe_index " + std::to_string(fe_index) + ")"), fe_index_(fe_index) {}

    std::int64_t fe_index() const noexcept { return fe_index_; }

private:
    std::int64_t fe_index_;
};

class EvalTimeout : public EvaluationError {
public:
    using EvaluationError::EvaluationError;
};

class ProtocolError : public EvaluationError {
public:
    using EvaluationError::EvaluationError;
};

class EvalFailure : public EvaluationError {
public:
    using EvaluationError::EvaluationError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

inline void require(bool condition, const char* message) {
    if (!condition) {
        throw ContractViolation(message);
    }
}

} // namespace clmea

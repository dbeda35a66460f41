#pragma once

#include <stdexcept>
#include <string>

namespace tritrophic {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid model parameters or invalid user configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParameterError : public ConfigError {
public:
    enum class Kind { NonPositiveParameter, NegativeAttraction, NonFinite };

    ParameterError(Kind kind, std::string field, const std::string& what)
        : ConfigError(what), kind_(kind), field_(std::move(field)) {}

    Kind kind() const noexcept { return kind_; }
    const std::string& field() const noexcept { return field_; }

private:
    Kind kind_;
    std::string field_;
};

class ParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class UnknownKey : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Numerical failures (CLI exit code 3).
class NumericError : public Error {
public:
    using Error::Error;
};

/// Argument lies outside the domain of a function.
class DomainError : public NumericError {
public:
    using NumericError::NumericError;
};

/// A structural precondition such as ae > m does not hold.
class PrereqError : public NumericError {
public:
    using NumericError::NumericError;
};

class NotCritical : public NumericError {
public:
    using NumericError::NumericError;
};

class NoFoldInRange : public NumericError {
public:
    using NumericError::NumericError;
};

class NoHopfInRange : public NumericError {
public:
    using NumericError::NumericError;
};

class BranchLost : public NumericError {
public:
    using NumericError::NumericError;
};

class StepSizeUnderflow : public NumericError {
public:
    using NumericError::NumericError;
};

class NonFiniteState : public NumericError {
public:
    using NumericError::NumericError;
};

class PositivityViolation : public NumericError {
public:
    using NumericError::NumericError;
};

} // namespace tritrophic

#pragma once

#include <stdexcept>
#include <string>

namespace rpme {

// Exit codes used by the command-line front end.
enum class ExitCode : int { Ok = 0, Usage = 1, Numeric = 2, Invariant = 3 };

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual ExitCode exit_code() const noexcept { return ExitCode::Numeric; }
};

/// Argument outside the mathematical domain of an operation (u < 0, s <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::Usage; }
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::Usage; }
};

/// Quadrature, root finding or time stepping failed to reach its tolerance.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Malformed or invalid configuration text.
class ConfigError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::Usage; }
};

/// A structural law that must hold on every trajectory was violated.
class InvariantViolation : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::Invariant; }
};

}  // namespace rpme

#pragma once

#include <stdexcept>
#include <string>

namespace okunfit {

/// Error families double as the CLI exit codes.
enum class ErrorFamily : int {
    contract = 2,    ///< input or argument violates a documented invariant
    infeasible = 3,  ///< the numerical problem has no admissible solution
    io = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorFamily family, std::string kind, const std::string& message)
        : std::runtime_error(message), family_(family), kind_(std::move(kind)) {}

    ErrorFamily family() const noexcept { return family_; }
    const std::string& kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(family_); }

private:
    ErrorFamily family_;
    std::string kind_;
};

class ContractError : public Error {
public:
    explicit ContractError(const std::string& message, std::string kind = "ContractError")
        : Error(ErrorFamily::contract, std::move(kind), message) {}
};

class DomainError : public ContractError {
public:
    explicit DomainError(const std::string& message) : ContractError(message, "DomainError") {}
};

class MissingYearError : public ContractError {
public:
    explicit MissingYearError(const std::string& message)
        : ContractError(message, "MissingYearError") {}
};

class GapError : public ContractError {
public:
    explicit GapError(const std::string& message) : ContractError(message, "GapError") {}
};

class NoOverlapError : public ContractError {
public:
    explicit NoOverlapError(const std::string& message)
        : ContractError(message, "NoOverlapError") {}
};

/// Refusal to compute a statistic that would discard too much of the sample.
class RefusedError : public ContractError {
public:
    explicit RefusedError(const std::string& message) : ContractError(message, "RefusedError") {}
};

/// Malformed input file; the message carries `file:line`.
class ParseError : public ContractError {
public:
    explicit ParseError(const std::string& message) : ContractError(message, "ParseError") {}
};

class ConstraintError : public Error {
public:
    explicit ConstraintError(const std::string& message, std::string kind = "ConstraintError")
        : Error(ErrorFamily::infeasible, std::move(kind), message) {}
};

class SingularFitError : public ConstraintError {
public:
    explicit SingularFitError(const std::string& message)
        : ConstraintError(message, "SingularFitError") {}
};

class DegenerateRegressionError : public ConstraintError {
public:
    explicit DegenerateRegressionError(const std::string& message)
        : ConstraintError(message, "DegenerateRegressionError") {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error(ErrorFamily::io, "IoError", message) {}
};

}  // namespace okunfit

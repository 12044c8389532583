#pragma once

#include <stdexcept>
#include <string>

namespace rbfs {

// Input-side failures (bad parameters, malformed data, non-unisolvent sets)
// derive from InputError; numerical failures derive from NumericalError.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParameterError : public InputError {
public:
    using InputError::InputError;
};

class UnisolvencyError : public InputError {
public:
    using InputError::InputError;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t line)
        : InputError(line > 0 ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolveError : public NumericalError {
public:
    SolveError(const std::string& what, double relative_residual)
        : NumericalError(what), residual_(relative_residual) {}
    double relative_residual() const noexcept { return residual_; }

private:
    double residual_;
};

// A model whose coefficients violate the polynomial annihilation constraint.
class ContractError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace rbfs

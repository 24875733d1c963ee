#pragma once

#include <stdexcept>
#include <string>

namespace helson {

/// Bad argument or value outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// 64-bit integer range exceeded; never silently wrapped.
class OverflowError : public std::runtime_error {
public:
    explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

/// A series or integral required by the operation diverges.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Caller violated a documented precondition (e.g. non-symmetric input).
class ContractError : public std::runtime_error {
public:
    explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative numerical method failed to converge within its budget.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Input is structurally valid but not supported by this operation.
class UnsupportedInputError : public std::runtime_error {
public:
    explicit UnsupportedInputError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace helson

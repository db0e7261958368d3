#pragma once

#include <stdexcept>
#include <string>

namespace osbounds {

// Raised when an argument violates an operation's precondition.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Raised when an iterative scheme fails to reach its target accuracy.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}

    double achieved_tolerance() const noexcept { return achieved_; }

private:
    double achieved_;
};

// Raised for queries that have no sharp bound in this library (e.g. an
// independent, non-identical sample at a non-extreme rank).
class UnsupportedRegime : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace osbounds

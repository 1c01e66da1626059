#pragma once

#include <stdexcept>
#include <string>

namespace rskld {

/// Argument outside a function's domain (e.g. J'(x) for x > 2).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// An iterative routine failed to converge within its budget.
class NumericFailure : public std::runtime_error {
public:
    explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

// Invalid arguments use std::invalid_argument directly.

}  // namespace rskld

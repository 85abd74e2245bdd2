#pragma once

#include <stdexcept>
#include <string>

namespace cantorconj {

// Argument outside the domain of an operation (bad interval, level out of range, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// c > 1/4: x^2 + c = x has no real solution.
class NoRealFixedPoint : public DomainError {
public:
    using DomainError::DomainError;
};

// Parameters outside the certified Cantor regime, or a build mode whose
// refinement would not contract.
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed Cantor set description or serialized document.
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IOError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cantorconj

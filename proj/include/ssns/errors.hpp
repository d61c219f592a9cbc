#pragma once

#include <stdexcept>
#include <string>

namespace ssns {

/// Argument outside the mathematical domain of an operation (negative time, p < 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Fields living on different grids were combined.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input violates a documented precondition (non-solenoidal data, uncertified ledger, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed: quadrature did not converge, a run produced NaN,
/// or a checked inequality was violated beyond its slack.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ssns

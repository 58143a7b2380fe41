#pragma once

#include <stdexcept>
#include <string>

namespace weyldyn {

// Bad parameters or malformed input data.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A point was requested outside the computed kernel triangle or grid.
class DomainError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// The Neumann series did not reach the requested tolerance.
class NoConvergence : public std::runtime_error {
public:
    NoConvergence(const std::string& what, int terms, double last_term_max)
        : std::runtime_error(what), terms_used(terms), last_term(last_term_max) {}

    int terms_used;
    double last_term;
};

// Spectral parameter at or below the convergence threshold.
class RegionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Truncated transform whose tail bound exceeds the requested tolerance.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical blow-up inside an oracle.
class BlowUp : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace weyldyn

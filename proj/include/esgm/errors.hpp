#ifndef ESGM_ERRORS_HPP
#define ESGM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace esgm {

// Base for all library failures that are not plain argument errors.
// Argument/precondition violations use std::invalid_argument directly.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File could not be opened, read, or written.
struct IoError : Error {
    using Error::Error;
};

// CSV header does not match the required schema.
struct SchemaError : Error {
    using Error::Error;
};

// A numeric cell lies outside its documented range.
struct RangeError : Error {
    using Error::Error;
};

// The same (asset, year) key appeared twice in one file.
struct DuplicateKeyError : Error {
    using Error::Error;
};

// Value violates a mathematical domain requirement (e.g. log of a
// non-positive price).
struct DomainError : Error {
    using Error::Error;
};

// A rank statistic has a zero denominator (constant input vector).
struct UndefinedStatError : Error {
    using Error::Error;
};

// The optimizer ran out of budget before evaluating a feasible point.
struct SearchError : Error {
    using Error::Error;
};

// Every feasible weight vector yields an undefined objective.
struct DegenerateInstanceError : Error {
    using Error::Error;
};

// Run configuration is inconsistent or incomplete.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace esgm

#endif  // ESGM_ERRORS_HPP

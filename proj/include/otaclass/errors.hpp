#pragma once

#include <stdexcept>
#include <string>

namespace otaclass {

// Base of every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problems with user-supplied configuration or files (CLI exit code 1).
struct ConfigError : Error {
    using Error::Error;
};

// A config file that does not parse or violates the schema.
struct ParseError : ConfigError {
    using ConfigError::ConfigError;
};

// A parsed config whose values violate an invariant.
struct ValidationError : ConfigError {
    using ConfigError::ConfigError;
};

// Violations of a domain precondition at run time (CLI exit code 2).
struct DomainError : Error {
    using Error::Error;
};

struct NotSeparable : DomainError {
    using DomainError::DomainError;
};

struct DegenerateSet : DomainError {
    using DomainError::DomainError;
};

struct DimensionMismatch : DomainError {
    using DomainError::DomainError;
};

struct ZeroNormal : DomainError {
    using DomainError::DomainError;
};

struct DegenerateMapping : DomainError {
    using DomainError::DomainError;
};

struct OutOfRangePreimage : DomainError {
    using DomainError::DomainError;
};

struct EmptySampleSet : DomainError {
    using DomainError::DomainError;
};

struct ZeroMeanPower : DomainError {
    using DomainError::DomainError;
};

struct DimensionNotTwo : DomainError {
    using DomainError::DomainError;
};

} // namespace otaclass

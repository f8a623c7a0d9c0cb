#pragma once

#include <stdexcept>
#include <string>

namespace twoqubit {

/// Base for every contract violation raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonHermitianError : public Error {
public:
    using Error::Error;
};

class NotPsdError : public Error {
public:
    using Error::Error;
};

/// Input that fails state validation (norm, trace, basis tag, rank...).
class InvalidStateError : public Error {
public:
    using Error::Error;
};

/// Malformed or unreadable state/config files.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Out-of-range run configuration (counts, ranks, tolerances, suite names).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace twoqubit

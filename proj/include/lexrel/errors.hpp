#pragma once

#include <stdexcept>
#include <string>

namespace lexrel {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration: unknown keys, out-of-range parameters, missing files
/// named by a config, mismatched experiment wiring. CLI exit code 1.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Dataset could not be ingested at all (unreadable file, adapter column
/// missing from the header). Row-level problems are not errors; they are
/// collected in the IngestReport. CLI exit code 2.
class IngestError : public Error {
public:
    using Error::Error;
};

/// An operation was called with inputs that violate its preconditions
/// (single-class training set, unnormalized distribution, ...).
/// CLI exit code 3.
class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace lexrel

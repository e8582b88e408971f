#pragma once

#include <stdexcept>
#include <string>

namespace carbon_ledger {

// Base class for all toolkit errors. Subclasses map onto CLI exit codes:
// usage 1, input/format 2, no-match/empty 3, remote-provider 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad command line or flag combination.
class UsageError : public Error {
public:
    using Error::Error;
};

// Malformed input: bad CSV schema, bad JSON, bad numbers, bad timestamps.
class FormatError : public Error {
public:
    using Error::Error;
};

// Filesystem-level failure (open/read/write), message names the path.
class IoError : public Error {
public:
    using Error::Error;
};

// A filter or zone lookup produced an empty result.
class NoMatchError : public Error {
public:
    using Error::Error;
};

// Remote provider unreachable or returned a non-2xx status.
class TransportError : public Error {
public:
    TransportError(const std::string& what, int attempts)
        : Error(what), attempts_(attempts) {}
    explicit TransportError(const std::string& what) : Error(what), attempts_(1) {}

    int attempts() const noexcept { return attempts_; }

private:
    int attempts_;
};

// Child process could not be spawned.
class LaunchError : public Error {
public:
    using Error::Error;
};

} // namespace carbon_ledger

#pragma once

#include <stdexcept>
#include <string>

namespace ragcritic {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad configuration: unusable flags, malformed config values, 4xx endpoint
/// responses. Maps to CLI exit code 2.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Endpoint unreachable or persistently failing after the retry budget.
class TransportError : public Error {
public:
    TransportError(const std::string& what, int last_status)
        : Error(what), last_status_(last_status) {}

    int last_status() const { return last_status_; }

private:
    int last_status_ = 0;
};

/// The endpoint answered but the payload violates the wire contract.
class ProtocolError : public Error {
public:
    explicit ProtocolError(const std::string& what) : Error(what) {}
};

/// Caller misuse of a library function (empty reward group, empty gold list).
class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(what) {}
};

/// Content cannot be represented in the canonical critique format.
class EncodeError : public Error {
public:
    explicit EncodeError(const std::string& what) : Error(what) {}
};

}  // namespace ragcritic

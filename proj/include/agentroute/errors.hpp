#pragma once

#include <stdexcept>
#include <string>

namespace agentroute {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input file is not well-formed (bad JSON, wrong field types, unknown format version).
class ParseError : public Error {
public:
    using Error::Error;
};

// Input is well-formed but violates catalog rules: duplicate id, orphan tool,
// empty name. Messages name the offending record.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Filesystem failure while reading or writing an artifact.
class IoError : public Error {
public:
    using Error::Error;
};

// Embedding provider failure. retryable() distinguishes transient transport
// errors (timeouts, 429/5xx) from fatal ones (auth, malformed response).
class ProviderError : public Error {
public:
    explicit ProviderError(const std::string& msg, bool retryable = false)
        : Error(msg), retryable_(retryable) {}

    bool retryable() const { return retryable_; }

private:
    bool retryable_;
};

// Inconsistent run configuration (bad weights, N < K, missing credentials).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace agentroute

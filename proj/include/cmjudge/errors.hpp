#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cmjudge {

// Base class for all errors raised by this library. Subclasses encode the
// failure class so callers (and the CLI exit-code mapping) can dispatch on it.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A precondition or value-domain violation (bad argument, out-of-range score).
class DomainError : public Error {
  public:
    using Error::Error;
};

// Correlation requested over a constant vector.
class UndefinedCorrelationError : public DomainError {
  public:
    using DomainError::DomainError;
};

// Malformed input data; carries the 1-based line number when known.
class ParseError : public Error {
  public:
    ParseError(std::string msg, long line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : std::move(msg)),
          line_(line) {}
    long line() const { return line_; }

  private:
    long line_ = 0;
};

// Referential-integrity violation; carries the offending ids.
class IntegrityError : public Error {
  public:
    explicit IntegrityError(std::string msg, std::vector<std::string> ids = {})
        : Error(ids.empty() ? std::move(msg) : msg + " [" + join(ids) + "]"),
          ids_(std::move(ids)) {}
    const std::vector<std::string> &ids() const { return ids_; }

  private:
    static std::string join(const std::vector<std::string> &ids) {
        std::string out;
        for (const auto &id : ids) {
            if (!out.empty())
                out += ", ";
            out += id;
        }
        return out;
    }
    std::vector<std::string> ids_;
};

// Network-level failure after retries were exhausted.
class TransportError : public Error {
  public:
    TransportError(std::string msg, int attempts)
        : Error(msg + " (after " + std::to_string(attempts) + " attempt(s))"),
          attempts_(attempts) {}
    int attempts() const { return attempts_; }

  private:
    int attempts_ = 0;
};

// Endpoint answered with a non-retryable error status.
class EndpointError : public Error {
  public:
    EndpointError(std::string msg, int status)
        : Error("HTTP " + std::to_string(status) + ": " + msg), status_(status) {}
    int status() const { return status_; }

  private:
    int status_ = 0;
};

// The configured provider cannot satisfy the request (missing store entry,
// unsupported granularity).
class CapabilityError : public Error {
  public:
    using Error::Error;
};

} // namespace cmjudge

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace compchall {

/// Multi-field encoding rejected the input (field too long).
class EncodingError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Hash algorithm name not recognised, or bad server configuration.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Challenge could not be produced (entropy failure).
class ChallengeError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A Lamport chain has been consumed down to index 0; the account needs
/// re-enrollment before it can authenticate again.
class ChainExhaustedError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Verification was asked about a user the store does not know. Distinct
/// from an authentication failure; the caller decides what to disclose.
class UnknownUserError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class EnrollmentError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Store I/O failed, or a store file could not be used.
class StoreError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Store file header does not match this build/config (format version or
/// hash algorithm).
class IncompatibleStoreError : public StoreError {
    using StoreError::StoreError;
};

/// Malformed store file content; carries the 1-based line number.
class StoreParseError : public StoreError {
  public:
    StoreParseError(std::size_t line, const std::string& what)
        : StoreError("store file line " + std::to_string(line) + ": " + what),
          line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// A wire line could not be parsed, or a peer violated the message grammar.
class ProtocolError : public std::runtime_error {
  public:
    ProtocolError(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    /// Short token suitable for an ERR line.
    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

class NetworkError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace compchall

#pragma once

#include <stdexcept>
#include <string>

namespace pqkex {

// Every failure carries one of these codes so callers (and the adversarial
// test suites) can distinguish exactly which check rejected.
enum class Errc {
    // DER codec
    TruncatedInput,
    TrailingBytes,
    IndefiniteLength,
    NonMinimalLength,
    BadTag,
    BadOid,
    BadValue,
    // Certificates
    BadCaSignature,
    Expired,
    NotYetValid,
    MalformedExtension,
    UnknownScheme,
    MissingKey,
    BadTemplate,
    // SignedData messages
    CertInvalid,
    DigestMismatch,
    BadSignature,
    StaleTimestamp,
    MalformedMessage,
    UnknownContentType,
    // Handshake
    MismatchedRequestId,
    UnknownResponseId,
    InvalidState,
    CredentialMismatch,
    // Misc
    LengthMismatch,
    RandomFailure,
    AeadAuthFailure,
    IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace pqkex

#include "pqkex/errors.hpp"

namespace pqkex {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::TruncatedInput: return "TruncatedInput";
        case Errc::TrailingBytes: return "TrailingBytes";
        case Errc::IndefiniteLength: return "IndefiniteLength";
        case Errc::NonMinimalLength: return "NonMinimalLength";
        case Errc::BadTag: return "BadTag";
        case Errc::BadOid: return "BadOid";
        case Errc::BadValue: return "BadValue";
        case Errc::BadCaSignature: return "BadCaSignature";
        case Errc::Expired: return "Expired";
        case Errc::NotYetValid: return "NotYetValid";
        case Errc::MalformedExtension: return "MalformedExtension";
        case Errc::UnknownScheme: return "UnknownScheme";
        case Errc::MissingKey: return "MissingKey";
        case Errc::BadTemplate: return "BadTemplate";
        case Errc::CertInvalid: return "CertInvalid";
        case Errc::DigestMismatch: return "DigestMismatch";
        case Errc::BadSignature: return "BadSignature";
        case Errc::StaleTimestamp: return "StaleTimestamp";
        case Errc::MalformedMessage: return "MalformedMessage";
        case Errc::UnknownContentType: return "UnknownContentType";
        case Errc::MismatchedRequestId: return "MismatchedRequestId";
        case Errc::UnknownResponseId: return "UnknownResponseId";
        case Errc::InvalidState: return "InvalidState";
        case Errc::CredentialMismatch: return "CredentialMismatch";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::RandomFailure: return "RandomFailure";
        case Errc::AeadAuthFailure: return "AeadAuthFailure";
        case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

}  // namespace pqkex

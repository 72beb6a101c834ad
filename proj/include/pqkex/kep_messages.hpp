#pragma once

#include <array>
#include <optional>
#include <vector>

#include "pqkex/bytes.hpp"
#include "pqkex/certificates.hpp"
#include "pqkex/crypto.hpp"

namespace pqkex {

enum class MessageType { KepReq, KepResp, KepAck };

const char* message_type_name(MessageType type);

/// Inner content of a handshake message. kepReq carries neither payload nor
/// id; kepResp and kepAck carry both (the KEM ciphertext and h_1 / h_2).
struct ContentInfo {
    MessageType message_type = MessageType::KepReq;
    std::optional<KemCiphertext> payload;
    std::optional<std::array<uint8_t, 8>> peer_message_id;
};

struct SignerInfo {
    Bytes signer_serial;
    int64_t signing_time = 0;                  // t_1 / t_2 / t_3
    std::array<uint8_t, 32> message_digest{};  // SHAKE-256 over the content
    DsaAlgorithm signature_algorithm = DsaAlgorithm::MlDsa44;
    Bytes signature;  // s_1 / s_2 / s_3
};

struct SignedData {
    ContentInfo content;
    std::vector<Certificate> certificates;  // sender credential(s), signer first
    SignerInfo signer;
    Bytes encoded;  // canonical DER; R_1 / R_2 / R_3 on the wire
};

inline constexpr int64_t kDefaultFreshnessWindow = 300;  // seconds

/// Builds and signs one message. Deterministic: identical inputs produce
/// identical bytes. The signer's certificate must be first in `certs` and
/// its serial is the one placed in SignerInfo.
SignedData build(MessageType type, const ContentInfo& content,
                 const std::vector<Certificate>& certs, const DsaKeyPair& signer_key,
                 int64_t signing_time);

SignedData decode_message(ByteSpan der);

struct VerifyResult {
    MessageType type;
    ContentInfo content;
    ExtractedKeys keys;
};

/// Checks in order: certificates, digest, signature, freshness — the first
/// failing layer's code is thrown (CertInvalid / DigestMismatch /
/// BadSignature / StaleTimestamp).
VerifyResult verify(const SignedData& msg, ByteSpan ca_public, int64_t now,
                    int64_t freshness_window = kDefaultFreshnessWindow);

/// Same digest/signature/freshness pipeline but against an already-known
/// signer key instead of the embedded certificates (the kepAck path, where
/// the responder holds the keys extracted from Q_A).
VerifyResult verify_with_key(const SignedData& msg, DsaAlgorithm dsa_algorithm,
                             ByteSpan dsa_public, int64_t now,
                             int64_t freshness_window = kDefaultFreshnessWindow);

/// hashed_id8 of the canonical bytes: h_1 for a request, h_2 for a response.
std::array<uint8_t, 8> message_id(const SignedData& msg);

inline size_t encoded_length(const SignedData& msg) { return msg.encoded.size(); }

}  // namespace pqkex

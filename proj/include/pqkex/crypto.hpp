#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "pqkex/bytes.hpp"
#include "pqkex/rng.hpp"
#include "pqkex/suite.hpp"

namespace pqkex {

struct DsaKeyPair {
    DsaAlgorithm algorithm;
    Bytes public_key;  // U
    Bytes secret_key;  // u
};

struct KemKeyPair {
    KemAlgorithm algorithm;
    Bytes public_key;  // V
    Bytes secret_key;  // v
};

struct KemCiphertext {
    KemAlgorithm algorithm;
    Bytes bytes;  // c

    bool operator==(const KemCiphertext&) const = default;
};

struct SharedSecret {
    std::array<uint8_t, 32> bytes{};  // r

    bool operator==(const SharedSecret&) const = default;
};

struct Signature {
    DsaAlgorithm algorithm;
    Bytes bytes;  // s
};

DsaKeyPair dsa_keygen(DsaAlgorithm alg, RandomSource& rng);

/// Deterministic: the FIPS 204/205 hedge is derived from the secret key and
/// the message, so identical inputs produce identical signatures.
Signature dsa_sign(const DsaKeyPair& key, ByteSpan message);

/// Accept/reject only; malformed lengths reject without reaching the
/// underlying verifier. Increments the process-wide verification counter.
bool dsa_verify(DsaAlgorithm alg, ByteSpan public_key, ByteSpan message, ByteSpan signature);

KemKeyPair kem_keygen(KemAlgorithm alg, RandomSource& rng);
std::pair<KemCiphertext, SharedSecret> kem_encapsulate(KemAlgorithm alg, ByteSpan public_key,
                                                       RandomSource& rng);
/// ML-KEM implicit rejection: a mismatched ciphertext of the right length
/// yields a secret, just not the peer's. Wrong length is a hard error.
SharedSecret kem_decapsulate(const KemKeyPair& key, const KemCiphertext& ct);

Bytes shake256(ByteSpan data, size_t out_len);

/// Last 8 bytes of shake256(data, 32), per the HashedId8 convention.
std::array<uint8_t, 8> hashed_id8(ByteSpan data);

/// AES-256-GCM. Output is ciphertext followed by the 16-byte tag.
Bytes aead_seal(ByteSpan key32, ByteSpan nonce12, ByteSpan plaintext);
Bytes aead_open(ByteSpan key32, ByteSpan nonce12, ByteSpan sealed);

inline constexpr size_t kAeadTagBytes = 16;
inline constexpr size_t kAeadNonceBytes = 12;

/// Process-wide count of signature verifications attempted, for the
/// benchmark's per-step verification accounting.
uint64_t signature_verify_count();

}  // namespace pqkex

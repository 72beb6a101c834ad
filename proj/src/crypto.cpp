#include "pqkex/crypto.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <cstring>

#include "pqkex/errors.hpp"

extern "C" {
#include "fips202.h"

#include "crypto_kem/ml-kem-512/clean/api.h"
#include "crypto_kem/ml-kem-768/clean/api.h"
#include "crypto_kem/ml-kem-1024/clean/api.h"
#include "crypto_sign/ml-dsa-44/clean/api.h"
#include "crypto_sign/ml-dsa-65/clean/api.h"
#include "crypto_sign/ml-dsa-87/clean/api.h"
#include "crypto_sign/sphincs-shake-128s-simple/clean/api.h"
#include "crypto_sign/sphincs-shake-128f-simple/clean/api.h"
#include "crypto_sign/sphincs-shake-192s-simple/clean/api.h"
#include "crypto_sign/sphincs-shake-192f-simple/clean/api.h"
#include "crypto_sign/sphincs-shake-256s-simple/clean/api.h"
#include "crypto_sign/sphincs-shake-256f-simple/clean/api.h"
}

namespace pqkex {

namespace {

std::atomic<uint64_t> g_verify_count{0};

struct DsaVtable {
    int (*keypair)(uint8_t*, uint8_t*);
    int (*signature)(uint8_t*, size_t*, const uint8_t*, size_t, const uint8_t*);
    int (*verify)(const uint8_t*, size_t, const uint8_t*, size_t, const uint8_t*);
};

struct KemVtable {
    int (*keypair)(uint8_t*, uint8_t*);
    int (*enc)(uint8_t*, uint8_t*, const uint8_t*);
    int (*dec)(uint8_t*, const uint8_t*, const uint8_t*);
};

// ML-DSA's non-ctx entry points are macros over the _ctx variants, so wrap.
#define PQKEX_MLDSA_WRAP(PREFIX)                                                              \
    int PREFIX##_sig(uint8_t* sig, size_t* len, const uint8_t* m, size_t mlen,               \
                     const uint8_t* sk) {                                                     \
        return PREFIX##_crypto_sign_signature_ctx(sig, len, m, mlen, nullptr, 0, sk);        \
    }                                                                                         \
    int PREFIX##_ver(const uint8_t* sig, size_t len, const uint8_t* m, size_t mlen,          \
                     const uint8_t* pk) {                                                     \
        return PREFIX##_crypto_sign_verify_ctx(sig, len, m, mlen, nullptr, 0, pk);           \
    }

PQKEX_MLDSA_WRAP(PQCLEAN_MLDSA44_CLEAN)
PQKEX_MLDSA_WRAP(PQCLEAN_MLDSA65_CLEAN)
PQKEX_MLDSA_WRAP(PQCLEAN_MLDSA87_CLEAN)
#undef PQKEX_MLDSA_WRAP

const DsaVtable& dsa_vtable(DsaAlgorithm alg) {
    static const DsaVtable tables[] = {
        {PQCLEAN_MLDSA44_CLEAN_crypto_sign_keypair, PQCLEAN_MLDSA44_CLEAN_sig,
         PQCLEAN_MLDSA44_CLEAN_ver},
        {PQCLEAN_MLDSA65_CLEAN_crypto_sign_keypair, PQCLEAN_MLDSA65_CLEAN_sig,
         PQCLEAN_MLDSA65_CLEAN_ver},
        {PQCLEAN_MLDSA87_CLEAN_crypto_sign_keypair, PQCLEAN_MLDSA87_CLEAN_sig,
         PQCLEAN_MLDSA87_CLEAN_ver},
        {PQCLEAN_SPHINCSSHAKE128SSIMPLE_CLEAN_crypto_sign_keypair,
         PQCLEAN_SPHINCSSHAKE128SSIMPLE_CLEAN_crypto_sign_signature,
         PQCLEAN_SPHINCSSHAKE128SSIMPLE_CLEAN_crypto_sign_verify},
        {PQCLEAN_SPHINCSSHAKE192SSIMPLE_CLEAN_crypto_sign_keypair,
         PQCLEAN_SPHINCSSHAKE192SSIMPLE_CLEAN_crypto_sign_signature,
         PQCLEAN_SPHINCSSHAKE192SSIMPLE_CLEAN_crypto_sign_verify},
        {PQCLEAN_SPHINCSSHAKE256SSIMPLE_CLEAN_crypto_sign_keypair,
         PQCLEAN_SPHINCSSHAKE256SSIMPLE_CLEAN_crypto_sign_signature,
         PQCLEAN_SPHINCSSHAKE256SSIMPLE_CLEAN_crypto_sign_verify},
        {PQCLEAN_SPHINCSSHAKE128FSIMPLE_CLEAN_crypto_sign_keypair,
         PQCLEAN_SPHINCSSHAKE128FSIMPLE_CLEAN_crypto_sign_signature,
         PQCLEAN_SPHINCSSHAKE128FSIMPLE_CLEAN_crypto_sign_verify},
        {PQCLEAN_SPHINCSSHAKE192FSIMPLE_CLEAN_crypto_sign_keypair,
         PQCLEAN_SPHINCSSHAKE192FSIMPLE_CLEAN_crypto_sign_signature,
         PQCLEAN_SPHINCSSHAKE192FSIMPLE_CLEAN_crypto_sign_verify},
        {PQCLEAN_SPHINCSSHAKE256FSIMPLE_CLEAN_crypto_sign_keypair,
         PQCLEAN_SPHINCSSHAKE256FSIMPLE_CLEAN_crypto_sign_signature,
         PQCLEAN_SPHINCSSHAKE256FSIMPLE_CLEAN_crypto_sign_verify},
    };
    return tables[static_cast<int>(alg)];
}

const KemVtable& kem_vtable(KemAlgorithm alg) {
    static const KemVtable tables[] = {
        {PQCLEAN_MLKEM512_CLEAN_crypto_kem_keypair, PQCLEAN_MLKEM512_CLEAN_crypto_kem_enc,
         PQCLEAN_MLKEM512_CLEAN_crypto_kem_dec},
        {PQCLEAN_MLKEM768_CLEAN_crypto_kem_keypair, PQCLEAN_MLKEM768_CLEAN_crypto_kem_enc,
         PQCLEAN_MLKEM768_CLEAN_crypto_kem_dec},
        {PQCLEAN_MLKEM1024_CLEAN_crypto_kem_keypair, PQCLEAN_MLKEM1024_CLEAN_crypto_kem_enc,
         PQCLEAN_MLKEM1024_CLEAN_crypto_kem_dec},
    };
    return tables[static_cast<int>(alg)];
}

}  // namespace

DsaKeyPair dsa_keygen(DsaAlgorithm alg, RandomSource& rng) {
    const DsaParams& p = params(alg);
    DsaKeyPair out{alg, Bytes(p.public_key_bytes), Bytes(p.secret_key_bytes)};
    detail::RngScope scope(rng);
    if (dsa_vtable(alg).keypair(out.public_key.data(), out.secret_key.data()) != 0)
        fail(Errc::RandomFailure, "DSA key generation failed");
    return out;
}

Signature dsa_sign(const DsaKeyPair& key, ByteSpan message) {
    const DsaParams& p = params(key.algorithm);
    if (key.secret_key.size() != p.secret_key_bytes)
        fail(Errc::LengthMismatch, "DSA secret key size");
    // Hedge seed derived from the secret key and the message: signing is a
    // pure function of its inputs, and the hedge never leaves the signer.
    Bytes seed_input;
    seed_input.reserve(key.secret_key.size() + message.size() + 10);
    seed_input.insert(seed_input.end(), key.secret_key.begin(), key.secret_key.end());
    seed_input.insert(seed_input.end(), message.begin(), message.end());
    const char domain[] = "pqkex-sign";
    seed_input.insert(seed_input.end(), domain, domain + sizeof domain - 1);
    DeterministicRandom hedge(as_span(seed_input));
    detail::RngScope scope(hedge);

    Signature sig{key.algorithm, Bytes(p.signature_bytes)};
    size_t sig_len = sig.bytes.size();
    if (dsa_vtable(key.algorithm)
            .signature(sig.bytes.data(), &sig_len, message.data(), message.size(),
                       key.secret_key.data()) != 0)
        fail(Errc::BadValue, "signing failed");
    if (sig_len != p.signature_bytes) fail(Errc::LengthMismatch, "unexpected signature size");
    return sig;
}

bool dsa_verify(DsaAlgorithm alg, ByteSpan public_key, ByteSpan message, ByteSpan signature) {
    g_verify_count.fetch_add(1, std::memory_order_relaxed);
    const DsaParams& p = params(alg);
    if (public_key.size() != p.public_key_bytes) return false;
    if (signature.size() != p.signature_bytes) return false;
    return dsa_vtable(alg).verify(signature.data(), signature.size(), message.data(),
                                  message.size(), public_key.data()) == 0;
}

KemKeyPair kem_keygen(KemAlgorithm alg, RandomSource& rng) {
    const KemParams& p = params(alg);
    KemKeyPair out{alg, Bytes(p.public_key_bytes), Bytes(p.secret_key_bytes)};
    detail::RngScope scope(rng);
    if (kem_vtable(alg).keypair(out.public_key.data(), out.secret_key.data()) != 0)
        fail(Errc::RandomFailure, "KEM key generation failed");
    return out;
}

std::pair<KemCiphertext, SharedSecret> kem_encapsulate(KemAlgorithm alg, ByteSpan public_key,
                                                       RandomSource& rng) {
    const KemParams& p = params(alg);
    if (public_key.size() != p.public_key_bytes)
        fail(Errc::LengthMismatch, "KEM public key size");
    KemCiphertext ct{alg, Bytes(p.ciphertext_bytes)};
    SharedSecret ss;
    detail::RngScope scope(rng);
    if (kem_vtable(alg).enc(ct.bytes.data(), ss.bytes.data(), public_key.data()) != 0)
        fail(Errc::RandomFailure, "encapsulation failed");
    return {std::move(ct), ss};
}

SharedSecret kem_decapsulate(const KemKeyPair& key, const KemCiphertext& ct) {
    const KemParams& p = params(key.algorithm);
    if (ct.algorithm != key.algorithm) fail(Errc::LengthMismatch, "KEM parameter set mismatch");
    if (ct.bytes.size() != p.ciphertext_bytes)
        fail(Errc::LengthMismatch, "KEM ciphertext size");
    if (key.secret_key.size() != p.secret_key_bytes)
        fail(Errc::LengthMismatch, "KEM secret key size");
    SharedSecret ss;
    if (kem_vtable(key.algorithm).dec(ss.bytes.data(), ct.bytes.data(), key.secret_key.data()) !=
        0)
        fail(Errc::BadValue, "decapsulation failed");
    return ss;
}

Bytes shake256(ByteSpan data, size_t out_len) {
    Bytes out(out_len);
    ::shake256(out.data(), out.size(), data.data(), data.size());
    return out;
}

std::array<uint8_t, 8> hashed_id8(ByteSpan data) {
    Bytes digest = shake256(data, 32);
    std::array<uint8_t, 8> id{};
    std::memcpy(id.data(), digest.data() + 24, 8);
    return id;
}

namespace {

struct EvpCtx {
    EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
    ~EvpCtx() { EVP_CIPHER_CTX_free(ctx); }
};

}  // namespace

Bytes aead_seal(ByteSpan key32, ByteSpan nonce12, ByteSpan plaintext) {
    if (key32.size() != 32 || nonce12.size() != kAeadNonceBytes)
        fail(Errc::LengthMismatch, "AEAD key/nonce size");
    EvpCtx c;
    if (!c.ctx || EVP_EncryptInit_ex(c.ctx, EVP_aes_256_gcm(), nullptr, key32.data(),
                                     nonce12.data()) != 1)
        fail(Errc::BadValue, "AEAD init failed");
    Bytes out(plaintext.size() + kAeadTagBytes);
    int len = 0;
    if (!plaintext.empty() &&
        EVP_EncryptUpdate(c.ctx, out.data(), &len, plaintext.data(),
                          static_cast<int>(plaintext.size())) != 1)
        fail(Errc::BadValue, "AEAD encrypt failed");
    int fin = 0;
    if (EVP_EncryptFinal_ex(c.ctx, out.data() + len, &fin) != 1)
        fail(Errc::BadValue, "AEAD finalize failed");
    if (EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_GET_TAG, kAeadTagBytes,
                            out.data() + plaintext.size()) != 1)
        fail(Errc::BadValue, "AEAD tag failed");
    return out;
}

Bytes aead_open(ByteSpan key32, ByteSpan nonce12, ByteSpan sealed) {
    if (key32.size() != 32 || nonce12.size() != kAeadNonceBytes)
        fail(Errc::LengthMismatch, "AEAD key/nonce size");
    if (sealed.size() < kAeadTagBytes) fail(Errc::AeadAuthFailure, "sealed box too short");
    size_t ct_len = sealed.size() - kAeadTagBytes;
    EvpCtx c;
    if (!c.ctx || EVP_DecryptInit_ex(c.ctx, EVP_aes_256_gcm(), nullptr, key32.data(),
                                     nonce12.data()) != 1)
        fail(Errc::BadValue, "AEAD init failed");
    Bytes out(ct_len);
    int len = 0;
    if (ct_len > 0 &&
        EVP_DecryptUpdate(c.ctx, out.data(), &len, sealed.data(), static_cast<int>(ct_len)) != 1)
        fail(Errc::AeadAuthFailure, "AEAD decrypt failed");
    Bytes tag(sealed.begin() + static_cast<ptrdiff_t>(ct_len), sealed.end());
    if (EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_SET_TAG, kAeadTagBytes, tag.data()) != 1)
        fail(Errc::BadValue, "AEAD tag set failed");
    int fin = 0;
    if (EVP_DecryptFinal_ex(c.ctx, out.data() + len, &fin) != 1)
        fail(Errc::AeadAuthFailure, "AEAD authentication failed");
    return out;
}

uint64_t signature_verify_count() { return g_verify_count.load(std::memory_order_relaxed); }

}  // namespace pqkex

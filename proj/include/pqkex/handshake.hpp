#pragma once

#include <array>
#include <list>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pqkex/certificates.hpp"
#include "pqkex/crypto.hpp"
#include "pqkex/kep_messages.hpp"

namespace pqkex {

struct SessionKey {
    std::array<uint8_t, 32> bytes{};

    bool operator==(const SessionKey&) const = default;
};

/// k = r_A xor r_B, bytewise. Commutative.
SessionKey derive_session_key(const SharedSecret& r_a, const SharedSecret& r_b);

enum class CredentialMode { DualUsage, Pure };

struct Credential {
    CredentialMode mode = CredentialMode::DualUsage;
    CertScheme scheme = CertScheme::Composite;  // dual-usage scheme; PureDsa when mode == Pure
    Suite suite;
    DsaKeyPair dsa_keys;
    KemKeyPair kem_keys;
    // DualUsage: exactly one certificate. Pure: [pure DSA, pure KEM].
    std::vector<Certificate> certificates;
    // When set, prepended to every outgoing message's certificate list
    // (the include-CA-cert wire variant shown in the figures).
    std::optional<Certificate> ca_certificate_in_messages;

    void check() const;  // certificate keys must match the held key pairs

    std::vector<Certificate> request_certificates() const;  // kepReq / kepResp list
    std::vector<Certificate> ack_certificates() const;      // kepAck list (pure: DSA cert only)
};

Credential make_dual_credential(const CaContext& ca, CertScheme scheme, const CertTemplate& tmpl,
                                RandomSource& rng);
Credential make_pure_credential(const CaContext& ca, const CertTemplate& tmpl, RandomSource& rng);

enum class SessionState { Started, Completed, Failed };

struct InitiatorSession {
    Credential credential;
    Suite suite;
    SignedData sent_request;  // R_1, kept for the h_1 cross-check
    SessionState state = SessionState::Started;
    std::optional<SessionKey> result;
};

struct ResponderSession {
    std::array<uint8_t, 8> request_id{};   // h_1
    std::array<uint8_t, 8> response_id{};  // h_2
    ExtractedKeys peer_keys;               // from Q_A
    SharedSecret local_secret;             // r_B
    int64_t created_at = 0;
};

/// Pending responder sessions keyed by h_2. Bounded, per-entry expiry,
/// oldest-first eviction at capacity. peek/consume are linearizable: one
/// ack redeems an entry at most once even under concurrency.
class SessionTable {
public:
    explicit SessionTable(size_t capacity = 65536, int64_t expiry_seconds = 600);

    void insert(const ResponderSession& session, int64_t now);
    std::optional<ResponderSession> peek(const std::array<uint8_t, 8>& response_id, int64_t now);
    bool consume(const std::array<uint8_t, 8>& response_id);
    size_t size() const;

private:
    void purge_expired_locked(int64_t now);

    size_t capacity_;
    int64_t expiry_seconds_;
    mutable std::mutex mutex_;
    std::unordered_map<uint64_t, ResponderSession> entries_;
    std::list<uint64_t> insertion_order_;
};

struct HandshakeOptions {
    int64_t freshness_window = kDefaultFreshnessWindow;
};

/// Alice. Produces R_1 and the session that will consume R_2.
std::pair<InitiatorSession, SignedData> initiator_start(const Credential& credential,
                                                        const Suite& suite, int64_t now);

/// Bob. Verifies R_1, encapsulates r_B against V_A, emits R_2, stores the
/// pending session under h_2. The table is untouched on any failure.
SignedData responder_on_request(const SignedData& request, const Credential& credential,
                                SessionTable& table, ByteSpan ca_public, int64_t now,
                                RandomSource& rng, const HandshakeOptions& opts = {});

/// Alice. Verifies R_2, checks it answers our R_1, recovers r_B, encapsulates
/// r_A against V_B, emits R_3 and the session key. Any failure puts the
/// session in Failed.
std::pair<SignedData, SessionKey> initiator_on_response(InitiatorSession& session,
                                                        const SignedData& response,
                                                        ByteSpan ca_public, int64_t now,
                                                        RandomSource& rng,
                                                        const HandshakeOptions& opts = {});

/// Bob. Looks up h_2, verifies s_3 against the stored peer DSA key, recovers
/// r_A, derives the key. The entry is consumed only on success (one-shot).
SessionKey responder_on_ack(const SignedData& ack, const Credential& credential,
                            SessionTable& table, int64_t now,
                            const HandshakeOptions& opts = {});

}  // namespace pqkex

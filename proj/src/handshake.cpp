#include "pqkex/handshake.hpp"

#include <cstring>

#include "pqkex/errors.hpp"

namespace pqkex {

namespace {

uint64_t id_key(const std::array<uint8_t, 8>& id) {
    uint64_t k;
    std::memcpy(&k, id.data(), 8);
    return k;
}

Bytes fresh_serial(RandomSource& rng) {
    Bytes serial = rng.bytes(8);
    serial[0] = 0x40 | (serial[0] & 0x3F);  // positive, minimal, fixed width
    return serial;
}

}  // namespace

SessionKey derive_session_key(const SharedSecret& r_a, const SharedSecret& r_b) {
    SessionKey key;
    for (size_t i = 0; i < key.bytes.size(); ++i) key.bytes[i] = r_a.bytes[i] ^ r_b.bytes[i];
    return key;
}

void Credential::check() const {
    if (mode == CredentialMode::DualUsage) {
        if (certificates.size() != 1)
            fail(Errc::CredentialMismatch, "dual-usage credential needs exactly one certificate");
        const Certificate& cert = certificates[0];
        if (cert.scheme != scheme) fail(Errc::CredentialMismatch, "certificate scheme mismatch");
        if (cert.dsa_public != dsa_keys.public_key || cert.kem_public != kem_keys.public_key)
            fail(Errc::CredentialMismatch, "certificate keys do not match held key pairs");
    } else {
        if (certificates.size() != 2)
            fail(Errc::CredentialMismatch, "pure credential needs a DSA and a KEM certificate");
        if (certificates[0].scheme != CertScheme::PureDsa ||
            certificates[1].scheme != CertScheme::PureKem)
            fail(Errc::CredentialMismatch, "pure credential must be [pure-dsa, pure-kem]");
        if (certificates[0].dsa_public != dsa_keys.public_key ||
            certificates[1].kem_public != kem_keys.public_key)
            fail(Errc::CredentialMismatch, "certificate keys do not match held key pairs");
    }
    if (dsa_keys.algorithm != suite.dsa || kem_keys.algorithm != suite.kem)
        fail(Errc::CredentialMismatch, "key algorithms do not match the suite");
}

std::vector<Certificate> Credential::request_certificates() const {
    std::vector<Certificate> certs;
    certs.reserve(certificates.size() + 1);
    certs.insert(certs.end(), certificates.begin(), certificates.end());
    if (ca_certificate_in_messages) certs.push_back(*ca_certificate_in_messages);
    return certs;
}

std::vector<Certificate> Credential::ack_certificates() const {
    std::vector<Certificate> certs;
    // The ack only needs the DSA certificate in pure mode.
    certs.push_back(certificates.front());
    if (ca_certificate_in_messages) certs.push_back(*ca_certificate_in_messages);
    return certs;
}

Credential make_dual_credential(const CaContext& ca, CertScheme scheme, const CertTemplate& tmpl,
                                RandomSource& rng) {
    if (scheme != CertScheme::Composite && scheme != CertScheme::Catalyst &&
        scheme != CertScheme::Chameleon)
        fail(Errc::BadTemplate, "dual-usage credential needs a dual-usage scheme");
    Credential cred;
    cred.mode = CredentialMode::DualUsage;
    cred.scheme = scheme;
    cred.suite = ca.suite;
    cred.dsa_keys = dsa_keygen(ca.suite.dsa, rng);
    cred.kem_keys = kem_keygen(ca.suite.kem, rng);
    cred.certificates.push_back(
        issue(ca, tmpl, scheme, cred.dsa_keys.public_key, cred.kem_keys.public_key));
    cred.check();
    return cred;
}

Credential make_pure_credential(const CaContext& ca, const CertTemplate& tmpl,
                                RandomSource& rng) {
    Credential cred;
    cred.mode = CredentialMode::Pure;
    cred.scheme = CertScheme::PureDsa;
    cred.suite = ca.suite;
    cred.dsa_keys = dsa_keygen(ca.suite.dsa, rng);
    cred.kem_keys = kem_keygen(ca.suite.kem, rng);
    CertTemplate dsa_tmpl = tmpl;
    cred.certificates.push_back(
        issue(ca, dsa_tmpl, CertScheme::PureDsa, cred.dsa_keys.public_key, std::nullopt));
    CertTemplate kem_tmpl = tmpl;
    kem_tmpl.serial = fresh_serial(rng);
    cred.certificates.push_back(
        issue(ca, kem_tmpl, CertScheme::PureKem, std::nullopt, cred.kem_keys.public_key));
    cred.check();
    return cred;
}

SessionTable::SessionTable(size_t capacity, int64_t expiry_seconds)
    : capacity_(capacity), expiry_seconds_(expiry_seconds) {}

void SessionTable::purge_expired_locked(int64_t now) {
    for (auto it = insertion_order_.begin(); it != insertion_order_.end();) {
        auto entry = entries_.find(*it);
        if (entry == entries_.end()) {
            it = insertion_order_.erase(it);
            continue;
        }
        if (now - entry->second.created_at > expiry_seconds_) {
            entries_.erase(entry);
            it = insertion_order_.erase(it);
        } else {
            ++it;
        }
    }
}

void SessionTable::insert(const ResponderSession& session, int64_t now) {
    std::lock_guard lock(mutex_);
    purge_expired_locked(now);
    while (entries_.size() >= capacity_ && !insertion_order_.empty()) {
        entries_.erase(insertion_order_.front());  // oldest first
        insertion_order_.pop_front();
    }
    uint64_t key = id_key(session.response_id);
    if (entries_.emplace(key, session).second) insertion_order_.push_back(key);
}

std::optional<ResponderSession> SessionTable::peek(const std::array<uint8_t, 8>& response_id,
                                                   int64_t now) {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(id_key(response_id));
    if (it == entries_.end()) return std::nullopt;
    if (now - it->second.created_at > expiry_seconds_) {
        entries_.erase(it);
        return std::nullopt;
    }
    return it->second;
}

bool SessionTable::consume(const std::array<uint8_t, 8>& response_id) {
    std::lock_guard lock(mutex_);
    return entries_.erase(id_key(response_id)) > 0;
}

size_t SessionTable::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

std::pair<InitiatorSession, SignedData> initiator_start(const Credential& credential,
                                                        const Suite& suite, int64_t now) {
    if (credential.suite != suite) fail(Errc::CredentialMismatch, "credential/suite mismatch");
    credential.check();

    ContentInfo content;
    content.message_type = MessageType::KepReq;
    SignedData request = build(MessageType::KepReq, content, credential.request_certificates(),
                               credential.dsa_keys, now);

    InitiatorSession session;
    session.credential = credential;
    session.suite = suite;
    session.sent_request = request;
    session.state = SessionState::Started;
    return {std::move(session), request};
}

SignedData responder_on_request(const SignedData& request, const Credential& credential,
                                SessionTable& table, ByteSpan ca_public, int64_t now,
                                RandomSource& rng, const HandshakeOptions& opts) {
    if (request.content.message_type != MessageType::KepReq)
        fail(Errc::MalformedMessage, "expected kepReq");
    VerifyResult verified = verify(request, ca_public, now, opts.freshness_window);
    if (!verified.keys.kem_public)
        fail(Errc::CertInvalid, "initiator certificates carry no KEM key");
    if (!verified.keys.dsa_algorithm)
        fail(Errc::CertInvalid, "initiator certificates carry no DSA key");

    auto [ciphertext, secret] =
        kem_encapsulate(*verified.keys.kem_algorithm, as_span(*verified.keys.kem_public), rng);

    ContentInfo content;
    content.message_type = MessageType::KepResp;
    content.payload = ciphertext;
    content.peer_message_id = message_id(request);  // h_1
    SignedData response = build(MessageType::KepResp, content,
                                credential.request_certificates(), credential.dsa_keys, now);

    ResponderSession session;
    session.request_id = *content.peer_message_id;
    session.response_id = message_id(response);  // h_2
    session.peer_keys = verified.keys;
    session.local_secret = secret;  // r_B
    session.created_at = now;
    table.insert(session, now);
    return response;
}

std::pair<SignedData, SessionKey> initiator_on_response(InitiatorSession& session,
                                                        const SignedData& response,
                                                        ByteSpan ca_public, int64_t now,
                                                        RandomSource& rng,
                                                        const HandshakeOptions& opts) {
    if (session.state != SessionState::Started)
        fail(Errc::InvalidState, "session is not awaiting a response");
    try {
        if (response.content.message_type != MessageType::KepResp)
            fail(Errc::MalformedMessage, "expected kepResp");
        VerifyResult verified = verify(response, ca_public, now, opts.freshness_window);

        // h_1 binding: the response must answer our request, not another one.
        if (!response.content.peer_message_id ||
            *response.content.peer_message_id != message_id(session.sent_request))
            fail(Errc::MismatchedRequestId, "response does not answer our request");

        if (!verified.keys.kem_public)
            fail(Errc::CertInvalid, "responder certificates carry no KEM key");

        SharedSecret r_b = kem_decapsulate(session.credential.kem_keys,
                                           *response.content.payload);
        auto [ciphertext, r_a] = kem_encapsulate(
            *verified.keys.kem_algorithm, as_span(*verified.keys.kem_public), rng);

        ContentInfo content;
        content.message_type = MessageType::KepAck;
        content.payload = ciphertext;
        content.peer_message_id = message_id(response);  // h_2
        SignedData ack = build(MessageType::KepAck, content,
                               session.credential.ack_certificates(),
                               session.credential.dsa_keys, now);

        SessionKey key = derive_session_key(r_a, r_b);
        session.state = SessionState::Completed;
        session.result = key;
        return {std::move(ack), key};
    } catch (...) {
        session.state = SessionState::Failed;
        throw;
    }
}

SessionKey responder_on_ack(const SignedData& ack, const Credential& credential,
                            SessionTable& table, int64_t now, const HandshakeOptions& opts) {
    if (ack.content.message_type != MessageType::KepAck)
        fail(Errc::MalformedMessage, "expected kepAck");
    if (!ack.content.peer_message_id) fail(Errc::MalformedMessage, "kepAck without response id");

    auto session = table.peek(*ack.content.peer_message_id, now);
    if (!session) fail(Errc::UnknownResponseId, "no pending session for this response id");

    // s_3 is checked against the DSA key stored from Q_A, not against the
    // certificates the ack happens to carry.
    verify_with_key(ack, *session->peer_keys.dsa_algorithm,
                    as_span(session->peer_keys.dsa_public), now, opts.freshness_window);

    SharedSecret r_a = kem_decapsulate(credential.kem_keys, *ack.content.payload);
    SessionKey key = derive_session_key(r_a, session->local_secret);

    // One-shot: exactly one ack may redeem the entry, even concurrently.
    if (!table.consume(*ack.content.peer_message_id))
        fail(Errc::UnknownResponseId, "session already redeemed");
    return key;
}

}  // namespace pqkex

#include "pqkex/kep_messages.hpp"

#include <cstdlib>
#include <cstring>

#include "pqkex/der.hpp"
#include "pqkex/errors.hpp"
#include "pqkex/oids.hpp"

namespace pqkex {

namespace {

using der::TlvNode;

TlvNode algorithm_identifier(const der::Oid& oid) {
    return der::sequence({der::object_id(oid)});
}

der::Oid read_algorithm_oid(const TlvNode& node) {
    der::expect_tag(node, der::tags::Sequence, "AlgorithmIdentifier");
    if (node.children.size() != 1)
        fail(Errc::MalformedMessage, "AlgorithmIdentifier must hold exactly an OID");
    return der::read_oid(der::child(node, 0));
}

const der::Oid& content_oid(MessageType type) {
    switch (type) {
        case MessageType::KepReq: return oids::kContentKepReq;
        case MessageType::KepResp: return oids::kContentKepResp;
        case MessageType::KepAck: return oids::kContentKepAck;
    }
    fail(Errc::BadValue, "unknown message type");
}

std::optional<MessageType> type_from_oid(const der::Oid& oid) {
    if (oid == oids::kContentKepReq) return MessageType::KepReq;
    if (oid == oids::kContentKepResp) return MessageType::KepResp;
    if (oid == oids::kContentKepAck) return MessageType::KepAck;
    return std::nullopt;
}

std::optional<KemAlgorithm> kem_from_ciphertext_size(size_t size) {
    for (int i = 0; i < 3; ++i) {
        auto alg = static_cast<KemAlgorithm>(i);
        if (params(alg).ciphertext_bytes == size) return alg;
    }
    return std::nullopt;
}

void check_content(MessageType type, const ContentInfo& content) {
    if (content.message_type != type) fail(Errc::BadValue, "content/type mismatch");
    bool wants_payload = type != MessageType::KepReq;
    if (content.payload.has_value() != wants_payload)
        fail(Errc::BadValue, wants_payload ? "message requires a KEM ciphertext payload"
                                           : "kepReq carries no payload");
    if (content.peer_message_id.has_value() != wants_payload)
        fail(Errc::BadValue, wants_payload ? "message requires a peer message id"
                                           : "kepReq carries no peer message id");
    if (content.payload &&
        content.payload->bytes.size() != params(content.payload->algorithm).ciphertext_bytes)
        fail(Errc::LengthMismatch, "payload ciphertext size");
}

TlvNode content_node(const ContentInfo& content) {
    std::vector<TlvNode> body;
    if (content.payload) {
        body.push_back(der::octet_string(as_span(content.payload->bytes)));
        body.push_back(der::octet_string(
            ByteSpan(content.peer_message_id->data(), content.peer_message_id->size())));
    } else {
        body.push_back(der::null());
    }
    return der::sequence({der::object_id(content_oid(content.message_type)),
                          der::context(0, {der::sequence(std::move(body))})});
}

TlvNode signing_time_attribute(int64_t signing_time) {
    return der::sequence({der::object_id(oids::kPkcs9SigningTime),
                          der::set({der::generalized_time(signing_time)})});
}

TlvNode message_digest_attribute(const std::array<uint8_t, 32>& digest) {
    return der::sequence({der::object_id(oids::kPkcs9MessageDigest),
                          der::set({der::octet_string(ByteSpan(digest.data(), digest.size()))})});
}

/// The signature input: the signed attributes under their explicit SET tag
/// (the PKCS#7 re-tagging convention). The attributes happen to already be
/// in DER SET-of order.
Bytes signed_attributes_tbs(int64_t signing_time, const std::array<uint8_t, 32>& digest) {
    return der::encode(
        der::set({signing_time_attribute(signing_time), message_digest_attribute(digest)}));
}

std::array<uint8_t, 32> content_digest(const TlvNode& content) {
    Bytes digest = shake256(as_span(der::encode(content)), 32);
    std::array<uint8_t, 32> out{};
    std::memcpy(out.data(), digest.data(), 32);
    return out;
}

}  // namespace

const char* message_type_name(MessageType type) {
    switch (type) {
        case MessageType::KepReq: return "kepReq";
        case MessageType::KepResp: return "kepResp";
        case MessageType::KepAck: return "kepAck";
    }
    return "?";
}

SignedData build(MessageType type, const ContentInfo& content,
                 const std::vector<Certificate>& certs, const DsaKeyPair& signer_key,
                 int64_t signing_time) {
    check_content(type, content);
    if (certs.empty()) fail(Errc::BadValue, "certificate list must be non-empty");
    const Certificate& signer_cert = certs.front();
    if (!signer_cert.dsa_algorithm || signer_cert.dsa_public != signer_key.public_key ||
        *signer_cert.dsa_algorithm != signer_key.algorithm)
        fail(Errc::CredentialMismatch, "first certificate must carry the signer's DSA key");

    TlvNode content_info = content_node(content);
    std::array<uint8_t, 32> digest = content_digest(content_info);
    Bytes tbs = signed_attributes_tbs(signing_time, digest);
    Signature sig = dsa_sign(signer_key, as_span(tbs));

    TlvNode signer_info = der::sequence({
        der::integer(as_span(signer_cert.serial)),
        algorithm_identifier(oids::kShake256),
        der::context(0, {signing_time_attribute(signing_time), message_digest_attribute(digest)}),
        algorithm_identifier(oids::dsa_oid(signer_key.algorithm)),
        der::octet_string(as_span(sig.bytes)),
    });

    std::vector<TlvNode> cert_nodes;
    cert_nodes.reserve(certs.size());
    for (const Certificate& c : certs) cert_nodes.push_back(der::decode(as_span(c.encoded)));

    TlvNode signed_data = der::sequence({
        der::set({algorithm_identifier(oids::kShake256)}),
        content_info,
        der::context(0, std::move(cert_nodes)),
        der::set({signer_info}),
    });

    SignedData out;
    out.content = content;
    out.certificates = certs;
    out.signer = SignerInfo{signer_cert.serial, signing_time, digest, signer_key.algorithm,
                            sig.bytes};
    out.encoded = der::encode(signed_data);
    return out;
}

SignedData decode_message(ByteSpan input) {
    TlvNode root = der::decode(input);
    der::expect_tag(root, der::tags::Sequence, "SignedData");
    if (root.children.size() != 4) fail(Errc::MalformedMessage, "SignedData field count");

    SignedData msg;
    msg.encoded.assign(input.begin(), input.end());

    // digestAlgorithms: exactly { SHAKE-256 }.
    const TlvNode& digest_algs = der::child(root, 0);
    der::expect_tag(digest_algs, der::tags::Set, "digestAlgorithms");
    if (digest_algs.children.size() != 1 ||
        read_algorithm_oid(der::child(digest_algs, 0)) != oids::kShake256)
        fail(Errc::MalformedMessage, "digest algorithm must be SHAKE-256");

    // ContentInfo.
    const TlvNode& content_info = der::child(root, 1);
    der::expect_tag(content_info, der::tags::Sequence, "ContentInfo");
    if (content_info.children.size() != 2) fail(Errc::MalformedMessage, "ContentInfo shape");
    der::Oid ct_oid = der::read_oid(der::child(content_info, 0));
    auto type = type_from_oid(ct_oid);
    if (!type) fail(Errc::UnknownContentType, "unknown content type " + ct_oid.to_string());
    msg.content.message_type = *type;
    const TlvNode& wrapper = der::child(content_info, 1);
    der::expect_tag(wrapper, der::tags::context(0), "content");
    const TlvNode& body = der::child(wrapper, 0);
    der::expect_tag(body, der::tags::Sequence, "message body");
    if (*type == MessageType::KepReq) {
        if (body.children.size() != 1 || der::child(body, 0).tag != der::tags::Null)
            fail(Errc::MalformedMessage, "kepReq body must be NULL");
    } else {
        if (body.children.size() != 2) fail(Errc::MalformedMessage, "message body shape");
        const TlvNode& payload = der::child(body, 0);
        der::expect_tag(payload, der::tags::OctetString, "payload");
        auto kem = kem_from_ciphertext_size(payload.value.size());
        if (!kem) fail(Errc::MalformedMessage, "payload is not an ML-KEM ciphertext");
        msg.content.payload = KemCiphertext{*kem, payload.value};
        const TlvNode& peer_id = der::child(body, 1);
        der::expect_tag(peer_id, der::tags::OctetString, "peer message id");
        if (peer_id.value.size() != 8) fail(Errc::MalformedMessage, "peer message id size");
        std::array<uint8_t, 8> id{};
        std::memcpy(id.data(), peer_id.value.data(), 8);
        msg.content.peer_message_id = id;
    }

    // Certificates; individual certificate defects surface as CertInvalid.
    const TlvNode& certs = der::child(root, 2);
    der::expect_tag(certs, der::tags::context(0), "certificates");
    if (certs.children.empty()) fail(Errc::MalformedMessage, "certificate list empty");
    for (const TlvNode& c : certs.children) {
        try {
            msg.certificates.push_back(decode_certificate(as_span(der::encode(c))));
        } catch (const Error& e) {
            fail(Errc::CertInvalid, e.what());
        }
    }

    // SignerInfos: exactly one signer.
    const TlvNode& signer_infos = der::child(root, 3);
    der::expect_tag(signer_infos, der::tags::Set, "signerInfos");
    if (signer_infos.children.size() != 1)
        fail(Errc::MalformedMessage, "exactly one SignerInfo required");
    const TlvNode& si = der::child(signer_infos, 0);
    der::expect_tag(si, der::tags::Sequence, "SignerInfo");
    if (si.children.size() != 5) fail(Errc::MalformedMessage, "SignerInfo shape");
    msg.signer.signer_serial = der::read_integer_content(der::child(si, 0));
    if (read_algorithm_oid(der::child(si, 1)) != oids::kShake256)
        fail(Errc::MalformedMessage, "SignerInfo digest algorithm must be SHAKE-256");

    const TlvNode& attrs = der::child(si, 2);
    der::expect_tag(attrs, der::tags::context(0), "signedAttributes");
    if (attrs.children.size() != 2) fail(Errc::MalformedMessage, "signed attribute count");
    const TlvNode& time_attr = der::child(attrs, 0);
    der::expect_tag(time_attr, der::tags::Sequence, "signingTime attribute");
    if (time_attr.children.size() != 2 || der::child(time_attr, 1).children.size() != 1)
        fail(Errc::MalformedMessage, "signingTime attribute shape");
    if (der::read_oid(der::child(time_attr, 0)) != oids::kPkcs9SigningTime)
        fail(Errc::MalformedMessage, "first signed attribute must be signingTime");
    msg.signer.signing_time =
        der::read_generalized_time(der::child(der::child(time_attr, 1), 0));
    const TlvNode& digest_attr = der::child(attrs, 1);
    der::expect_tag(digest_attr, der::tags::Sequence, "messageDigest attribute");
    if (digest_attr.children.size() != 2 || der::child(digest_attr, 1).children.size() != 1)
        fail(Errc::MalformedMessage, "messageDigest attribute shape");
    if (der::read_oid(der::child(digest_attr, 0)) != oids::kPkcs9MessageDigest)
        fail(Errc::MalformedMessage, "second signed attribute must be messageDigest");
    const TlvNode& digest_value = der::child(der::child(digest_attr, 1), 0);
    der::expect_tag(digest_value, der::tags::OctetString, "messageDigest");
    if (digest_value.value.size() != 32) fail(Errc::MalformedMessage, "messageDigest size");
    std::memcpy(msg.signer.message_digest.data(), digest_value.value.data(), 32);

    der::Oid sig_alg = read_algorithm_oid(der::child(si, 3));
    auto dsa = oids::dsa_from_oid(sig_alg);
    if (!dsa) fail(Errc::MalformedMessage, "unknown signature algorithm");
    msg.signer.signature_algorithm = *dsa;
    const TlvNode& sig = der::child(si, 4);
    der::expect_tag(sig, der::tags::OctetString, "signature");
    if (sig.value.size() != params(*dsa).signature_bytes)
        fail(Errc::MalformedMessage, "signature size");
    msg.signer.signature = sig.value;
    return msg;
}

namespace {

void check_digest_signature_freshness(const SignedData& msg, DsaAlgorithm dsa_algorithm,
                                      ByteSpan dsa_public, int64_t now,
                                      int64_t freshness_window) {
    std::array<uint8_t, 32> recomputed = content_digest(content_node(msg.content));
    if (!ct_equal(ByteSpan(recomputed.data(), 32),
                  ByteSpan(msg.signer.message_digest.data(), 32)))
        fail(Errc::DigestMismatch, "messageDigest does not match the content");

    if (msg.signer.signature_algorithm != dsa_algorithm)
        fail(Errc::BadSignature, "signature algorithm does not match the signer key");
    Bytes tbs = signed_attributes_tbs(msg.signer.signing_time, msg.signer.message_digest);
    if (!dsa_verify(dsa_algorithm, dsa_public, as_span(tbs), as_span(msg.signer.signature)))
        fail(Errc::BadSignature, "signature does not verify");

    int64_t age = now - msg.signer.signing_time;
    if (age < 0) age = -age;
    if (age > freshness_window) fail(Errc::StaleTimestamp, "signingTime outside freshness window");
}

}  // namespace

VerifyResult verify(const SignedData& msg, ByteSpan ca_public, int64_t now,
                    int64_t freshness_window) {
    if (msg.certificates.empty()) fail(Errc::CertInvalid, "no certificates");

    ExtractedKeys keys;
    const Certificate* signer_cert = nullptr;
    for (const Certificate& cert : msg.certificates) {
        ExtractedKeys cert_keys;
        try {
            cert_keys = validate(cert, ca_public, now);
        } catch (const Error& e) {
            fail(Errc::CertInvalid, e.what());
        }
        if (cert.serial == msg.signer.signer_serial && signer_cert == nullptr) {
            signer_cert = &cert;
            keys.dsa_algorithm = cert_keys.dsa_algorithm;
            keys.dsa_public = cert_keys.dsa_public;
        }
        if (!keys.kem_public && cert_keys.kem_public) {
            keys.kem_algorithm = cert_keys.kem_algorithm;
            keys.kem_public = cert_keys.kem_public;
        }
    }
    if (signer_cert == nullptr)
        fail(Errc::CertInvalid, "no certificate matches the SignerInfo serial");
    if (!keys.dsa_algorithm)
        fail(Errc::CertInvalid, "signer certificate carries no DSA key");

    check_digest_signature_freshness(msg, *keys.dsa_algorithm, as_span(keys.dsa_public), now,
                                     freshness_window);
    return VerifyResult{msg.content.message_type, msg.content, std::move(keys)};
}

VerifyResult verify_with_key(const SignedData& msg, DsaAlgorithm dsa_algorithm,
                             ByteSpan dsa_public, int64_t now, int64_t freshness_window) {
    check_digest_signature_freshness(msg, dsa_algorithm, dsa_public, now, freshness_window);
    ExtractedKeys keys;
    keys.dsa_algorithm = dsa_algorithm;
    keys.dsa_public.assign(dsa_public.begin(), dsa_public.end());
    return VerifyResult{msg.content.message_type, msg.content, std::move(keys)};
}

std::array<uint8_t, 8> message_id(const SignedData& msg) {
    return hashed_id8(as_span(msg.encoded));
}

}  // namespace pqkex

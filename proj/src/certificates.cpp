#include "pqkex/certificates.hpp"

#include <algorithm>

#include "pqkex/der.hpp"
#include "pqkex/errors.hpp"
#include "pqkex/oids.hpp"

namespace pqkex {

namespace {

using der::TlvNode;

TlvNode algorithm_identifier(const der::Oid& oid) {
    return der::sequence({der::object_id(oid)});
}

TlvNode name_node(std::string_view common_name) {
    return der::sequence({der::set({der::sequence(
        {der::object_id(oids::kCommonName), der::utf8_string(common_name)})})});
}

TlvNode spki_node(const der::Oid& algorithm, ByteSpan key) {
    return der::sequence({algorithm_identifier(algorithm), der::bit_string(key)});
}

TlvNode version_node() { return der::context(0, {der::integer(2)}); }

TlvNode validity_node(int64_t not_before, int64_t not_after) {
    return der::sequence({der::generalized_time(not_before), der::generalized_time(not_after)});
}

TlvNode extension_node(const der::Oid& oid, ByteSpan value) {
    return der::sequence({der::object_id(oid), der::octet_string(value)});
}

void check_template(const CertTemplate& tmpl) {
    if (tmpl.subject_common_name.empty() || tmpl.issuer_common_name.empty())
        fail(Errc::BadTemplate, "common names must be non-empty");
    if (tmpl.not_before >= tmpl.not_after)
        fail(Errc::BadTemplate, "notBefore must precede notAfter");
    if (tmpl.serial.empty() || tmpl.serial.size() > 20)
        fail(Errc::BadTemplate, "serial must be 1..20 bytes");
    if (tmpl.serial[0] == 0 || (tmpl.serial[0] & 0x80) != 0)
        fail(Errc::BadTemplate, "serial must be positive and minimally encoded");
}

Bytes delta_serial_for(const Bytes& serial) {
    Bytes delta = serial;
    delta.back() ^= 0x01;  // distinct from the host serial, same width
    return delta;
}

/// TBS of the delta certificate: everything inherited from the host except
/// serial and public key. Signed by the CA at issuance, reconstructed and
/// re-verified at validation.
TlvNode delta_tbs_node(const CertTemplate& tmpl, const Bytes& delta_serial,
                       const der::Oid& ca_alg, const der::Oid& kem_alg, ByteSpan kem_public) {
    return der::sequence({
        version_node(),
        der::integer(as_span(delta_serial)),
        algorithm_identifier(ca_alg),
        name_node(tmpl.issuer_common_name),
        validity_node(tmpl.not_before, tmpl.not_after),
        name_node(tmpl.subject_common_name),
        spki_node(kem_alg, kem_public),
    });
}

std::string read_name_cn(const TlvNode& name) {
    der::expect_tag(name, der::tags::Sequence, "Name");
    const TlvNode& rdn = der::child(name, 0);
    der::expect_tag(rdn, der::tags::Set, "RDN");
    const TlvNode& attr = der::child(rdn, 0);
    der::expect_tag(attr, der::tags::Sequence, "AttributeTypeAndValue");
    if (der::read_oid(der::child(attr, 0)) != oids::kCommonName)
        fail(Errc::BadValue, "only CommonName attributes are supported");
    return der::read_utf8_string(der::child(attr, 1));
}

der::Oid read_algorithm_identifier(const TlvNode& node) {
    der::expect_tag(node, der::tags::Sequence, "AlgorithmIdentifier");
    if (node.children.size() != 1)
        fail(Errc::BadValue, "AlgorithmIdentifier must hold exactly an OID");
    return der::read_oid(der::child(node, 0));
}

}  // namespace

const char* scheme_name(CertScheme scheme) {
    switch (scheme) {
        case CertScheme::Composite: return "composite";
        case CertScheme::Catalyst: return "catalyst";
        case CertScheme::Chameleon: return "chameleon";
        case CertScheme::PureDsa: return "pure-dsa";
        case CertScheme::PureKem: return "pure-kem";
    }
    return "?";
}

std::optional<CertScheme> parse_scheme(std::string_view name) {
    for (CertScheme s : {CertScheme::Composite, CertScheme::Catalyst, CertScheme::Chameleon,
                         CertScheme::PureDsa, CertScheme::PureKem})
        if (name == scheme_name(s)) return s;
    return std::nullopt;
}

CaContext make_ca(const Suite& suite, const CertTemplate& tmpl, RandomSource& rng) {
    CaContext ca;
    ca.suite = suite;
    ca.ca_keys = dsa_keygen(suite.dsa, rng);
    // issue() only needs the suite and the signing key, so the context can
    // self-issue its own PureDsa certificate.
    ca.ca_certificate = issue(ca, tmpl, CertScheme::PureDsa, ca.ca_keys.public_key, std::nullopt);
    return ca;
}

Certificate issue(const CaContext& ca, const CertTemplate& tmpl, CertScheme scheme,
                  const std::optional<Bytes>& dsa_public, const std::optional<Bytes>& kem_public) {
    check_template(tmpl);

    bool needs_dsa = scheme != CertScheme::PureKem;
    bool needs_kem = scheme != CertScheme::PureDsa;
    if (needs_dsa && !dsa_public) fail(Errc::MissingKey, "scheme requires a DSA public key");
    if (needs_kem && !kem_public) fail(Errc::MissingKey, "scheme requires a KEM public key");
    if (!needs_dsa && dsa_public) fail(Errc::BadTemplate, "pure-kem certificate given a DSA key");
    if (!needs_kem && kem_public) fail(Errc::BadTemplate, "pure-dsa certificate given a KEM key");

    const DsaParams& dsa_p = params(ca.suite.dsa);
    const KemParams& kem_p = params(ca.suite.kem);
    if (dsa_public && dsa_public->size() != dsa_p.public_key_bytes)
        fail(Errc::LengthMismatch, "DSA public key size");
    if (kem_public && kem_public->size() != kem_p.public_key_bytes)
        fail(Errc::LengthMismatch, "KEM public key size");

    der::Oid ca_alg = oids::dsa_oid(ca.suite.dsa);
    der::Oid dsa_alg = oids::dsa_oid(ca.suite.dsa);
    der::Oid kem_alg = oids::kem_oid(ca.suite.kem);

    TlvNode spki;
    std::vector<TlvNode> extensions;
    switch (scheme) {
        case CertScheme::Composite: {
            Bytes combined = *dsa_public;
            combined.insert(combined.end(), kem_public->begin(), kem_public->end());
            spki = spki_node(oids::combined_key_oid(ca.suite), combined);
            break;
        }
        case CertScheme::Catalyst: {
            spki = spki_node(dsa_alg, *dsa_public);
            Bytes alt_spki = der::encode(spki_node(kem_alg, *kem_public));
            extensions.push_back(extension_node(oids::kAltPublicKeyExtension, alt_spki));
            break;
        }
        case CertScheme::Chameleon: {
            spki = spki_node(dsa_alg, *dsa_public);
            Bytes delta_serial = delta_serial_for(tmpl.serial);
            TlvNode delta_tbs =
                delta_tbs_node(tmpl, delta_serial, ca_alg, kem_alg, *kem_public);
            Signature delta_sig = dsa_sign(ca.ca_keys, der::encode(delta_tbs));
            TlvNode descriptor = der::sequence({
                der::integer(as_span(delta_serial)),
                algorithm_identifier(ca_alg),
                spki_node(kem_alg, *kem_public),
                der::bit_string(as_span(delta_sig.bytes)),
            });
            extensions.push_back(
                extension_node(oids::kDeltaCertificateExtension, der::encode(descriptor)));
            break;
        }
        case CertScheme::PureDsa: spki = spki_node(dsa_alg, *dsa_public); break;
        case CertScheme::PureKem: spki = spki_node(kem_alg, *kem_public); break;
    }

    std::vector<TlvNode> tbs_children = {
        version_node(),
        der::integer(as_span(tmpl.serial)),
        algorithm_identifier(ca_alg),
        name_node(tmpl.issuer_common_name),
        validity_node(tmpl.not_before, tmpl.not_after),
        name_node(tmpl.subject_common_name),
        spki,
    };
    if (!extensions.empty())
        tbs_children.push_back(der::context(3, {der::sequence(std::move(extensions))}));

    TlvNode tbs = der::sequence(std::move(tbs_children));
    Bytes tbs_bytes = der::encode(tbs);
    Signature ca_sig = dsa_sign(ca.ca_keys, tbs_bytes);

    TlvNode cert = der::sequence({
        tbs,
        algorithm_identifier(ca_alg),
        der::bit_string(as_span(ca_sig.bytes)),
    });
    return decode_certificate(as_span(der::encode(cert)));
}

Certificate decode_certificate(ByteSpan input) {
    TlvNode root = der::decode(input);
    der::expect_tag(root, der::tags::Sequence, "Certificate");
    if (root.children.size() != 3) fail(Errc::BadValue, "Certificate must have three fields");

    Certificate cert;
    cert.encoded.assign(input.begin(), input.end());

    const TlvNode& tbs = der::child(root, 0);
    der::expect_tag(tbs, der::tags::Sequence, "TBSCertificate");
    cert.tbs_encoded = der::encode(tbs);
    if (tbs.children.size() != 7 && tbs.children.size() != 8)
        fail(Errc::BadValue, "TBSCertificate field count");

    const TlvNode& version = der::child(tbs, 0);
    der::expect_tag(version, der::tags::context(0), "version");
    if (der::read_small_integer(der::child(version, 0)) != 2)
        fail(Errc::BadValue, "only v3 certificates are supported");

    cert.serial = der::read_integer_content(der::child(tbs, 1));

    der::Oid tbs_alg = read_algorithm_identifier(der::child(tbs, 2));
    cert.issuer_common_name = read_name_cn(der::child(tbs, 3));

    const TlvNode& validity = der::child(tbs, 4);
    der::expect_tag(validity, der::tags::Sequence, "Validity");
    cert.not_before = der::read_generalized_time(der::child(validity, 0));
    cert.not_after = der::read_generalized_time(der::child(validity, 1));

    cert.subject_common_name = read_name_cn(der::child(tbs, 5));

    const TlvNode& spki = der::child(tbs, 6);
    der::expect_tag(spki, der::tags::Sequence, "SubjectPublicKeyInfo");
    der::Oid key_alg = read_algorithm_identifier(der::child(spki, 0));
    Bytes key_bits = der::read_bit_string(der::child(spki, 1));

    // Outer signature algorithm must match the TBS copy.
    der::Oid outer_alg = read_algorithm_identifier(der::child(root, 1));
    if (outer_alg != tbs_alg) fail(Errc::BadValue, "signature algorithm mismatch");
    auto ca_alg = oids::dsa_from_oid(outer_alg);
    if (!ca_alg) fail(Errc::UnknownScheme, "unknown certificate signature algorithm");
    cert.ca_algorithm = *ca_alg;
    cert.ca_signature = der::read_bit_string(der::child(root, 2));
    if (cert.ca_signature.size() != params(*ca_alg).signature_bytes)
        fail(Errc::BadValue, "CA signature size");

    // Classify the scheme from the key algorithm and extensions.
    bool has_extensions = tbs.children.size() == 8;
    Bytes alt_key_value, delta_value;
    bool saw_alt = false, saw_delta = false;
    if (has_extensions) {
        const TlvNode& wrapper = der::child(tbs, 7);
        der::expect_tag(wrapper, der::tags::context(3), "extensions");
        const TlvNode& ext_list = der::child(wrapper, 0);
        der::expect_tag(ext_list, der::tags::Sequence, "Extensions");
        for (const TlvNode& ext : ext_list.children) {
            der::expect_tag(ext, der::tags::Sequence, "Extension");
            if (ext.children.size() != 2) fail(Errc::MalformedExtension, "Extension shape");
            der::Oid ext_oid = der::read_oid(der::child(ext, 0));
            const TlvNode& value = der::child(ext, 1);
            der::expect_tag(value, der::tags::OctetString, "extnValue");
            if (ext_oid == oids::kAltPublicKeyExtension && !saw_alt) {
                saw_alt = true;
                alt_key_value = value.value;
            } else if (ext_oid == oids::kDeltaCertificateExtension && !saw_delta) {
                saw_delta = true;
                delta_value = value.value;
            } else {
                fail(Errc::MalformedExtension, "unknown or repeated extension " + ext_oid.to_string());
            }
        }
        if (saw_alt && saw_delta)
            fail(Errc::MalformedExtension, "certificate carries both dual-usage extensions");
        if (!saw_alt && !saw_delta) fail(Errc::MalformedExtension, "empty extension list");
    }

    if (auto suite = oids::suite_from_combined_key_oid(key_alg)) {
        if (has_extensions) fail(Errc::MalformedExtension, "composite certificate with extensions");
        cert.scheme = CertScheme::Composite;
        const DsaParams& dp = params(suite->dsa);
        const KemParams& kp = params(suite->kem);
        if (key_bits.size() != dp.public_key_bytes + kp.public_key_bytes)
            fail(Errc::BadValue, "combined key size");
        cert.dsa_algorithm = suite->dsa;
        cert.dsa_public.assign(key_bits.begin(),
                               key_bits.begin() + static_cast<ptrdiff_t>(dp.public_key_bytes));
        cert.kem_algorithm = suite->kem;
        cert.kem_public.assign(key_bits.begin() + static_cast<ptrdiff_t>(dp.public_key_bytes),
                               key_bits.end());
    } else if (auto dsa = oids::dsa_from_oid(key_alg)) {
        cert.dsa_algorithm = *dsa;
        cert.dsa_public = key_bits;
        if (key_bits.size() != params(*dsa).public_key_bytes)
            fail(Errc::BadValue, "DSA public key size");
        if (saw_alt) {
            cert.scheme = CertScheme::Catalyst;
            try {
                TlvNode alt_spki = der::decode(as_span(alt_key_value));
                der::expect_tag(alt_spki, der::tags::Sequence, "alt SPKI");
                der::Oid alt_alg = read_algorithm_identifier(der::child(alt_spki, 0));
                auto kem = oids::kem_from_oid(alt_alg);
                if (!kem) fail(Errc::BadValue, "alt key is not a KEM key");
                Bytes alt_bits = der::read_bit_string(der::child(alt_spki, 1));
                if (alt_bits.size() != params(*kem).public_key_bytes)
                    fail(Errc::BadValue, "alt key size");
                cert.kem_algorithm = *kem;
                cert.kem_public = std::move(alt_bits);
            } catch (const Error& e) {
                fail(Errc::MalformedExtension, e.what());
            }
        } else if (saw_delta) {
            cert.scheme = CertScheme::Chameleon;
            try {
                TlvNode descriptor = der::decode(as_span(delta_value));
                der::expect_tag(descriptor, der::tags::Sequence, "delta descriptor");
                if (descriptor.children.size() != 4)
                    fail(Errc::BadValue, "delta descriptor shape");
                cert.delta_serial = der::read_integer_content(der::child(descriptor, 0));
                der::Oid delta_alg = read_algorithm_identifier(der::child(descriptor, 1));
                if (delta_alg != outer_alg)
                    fail(Errc::BadValue, "delta signature algorithm mismatch");
                const TlvNode& delta_spki = der::child(descriptor, 2);
                der::expect_tag(delta_spki, der::tags::Sequence, "delta SPKI");
                der::Oid delta_key_alg = read_algorithm_identifier(der::child(delta_spki, 0));
                auto kem = oids::kem_from_oid(delta_key_alg);
                if (!kem) fail(Errc::BadValue, "delta key is not a KEM key");
                Bytes delta_bits = der::read_bit_string(der::child(delta_spki, 1));
                if (delta_bits.size() != params(*kem).public_key_bytes)
                    fail(Errc::BadValue, "delta key size");
                cert.kem_algorithm = *kem;
                cert.kem_public = std::move(delta_bits);
                cert.delta_signature = der::read_bit_string(der::child(descriptor, 3));
                if (cert.delta_signature.size() != params(cert.ca_algorithm).signature_bytes)
                    fail(Errc::BadValue, "delta signature size");
            } catch (const Error& e) {
                fail(Errc::MalformedExtension, e.what());
            }
        } else {
            cert.scheme = CertScheme::PureDsa;
        }
    } else if (auto kem = oids::kem_from_oid(key_alg)) {
        if (has_extensions) fail(Errc::MalformedExtension, "pure-kem certificate with extensions");
        cert.scheme = CertScheme::PureKem;
        cert.kem_algorithm = *kem;
        cert.kem_public = key_bits;
        if (key_bits.size() != params(*kem).public_key_bytes)
            fail(Errc::BadValue, "KEM public key size");
    } else {
        fail(Errc::UnknownScheme, "unrecognized public key algorithm " + key_alg.to_string());
    }

    return cert;
}

ExtractedKeys validate(const Certificate& cert, ByteSpan ca_public, int64_t now) {
    if (now < cert.not_before) fail(Errc::NotYetValid, "certificate not yet valid");
    if (now > cert.not_after) fail(Errc::Expired, "certificate expired");

    if (!dsa_verify(cert.ca_algorithm, ca_public, as_span(cert.tbs_encoded),
                    as_span(cert.ca_signature)))
        fail(Errc::BadCaSignature, "CA signature does not verify");

    if (cert.scheme == CertScheme::Chameleon) {
        CertTemplate tmpl{cert.subject_common_name, cert.issuer_common_name, cert.serial,
                          cert.not_before, cert.not_after};
        TlvNode delta_tbs = delta_tbs_node(tmpl, cert.delta_serial,
                                           oids::dsa_oid(cert.ca_algorithm),
                                           oids::kem_oid(*cert.kem_algorithm),
                                           as_span(cert.kem_public));
        if (!dsa_verify(cert.ca_algorithm, ca_public, as_span(der::encode(delta_tbs)),
                        as_span(cert.delta_signature)))
            fail(Errc::BadCaSignature, "delta certificate signature does not verify");
    }

    ExtractedKeys keys;
    keys.dsa_algorithm = cert.dsa_algorithm;
    keys.dsa_public = cert.dsa_public;
    keys.kem_algorithm = cert.kem_algorithm;
    if (cert.kem_algorithm) keys.kem_public = cert.kem_public;
    return keys;
}

std::string to_pem(const Certificate& cert) {
    std::string body = base64_encode(as_span(cert.encoded));
    std::string out = "-----BEGIN PQC CERTIFICATE-----\n";
    for (size_t i = 0; i < body.size(); i += 64) {
        out += body.substr(i, 64);
        out += "\n";
    }
    out += "-----END PQC CERTIFICATE-----\n";
    return out;
}

Certificate from_pem(std::string_view text) {
    constexpr std::string_view kBegin = "-----BEGIN PQC CERTIFICATE-----";
    constexpr std::string_view kEnd = "-----END PQC CERTIFICATE-----";
    size_t begin = text.find(kBegin);
    size_t end = text.find(kEnd);
    if (begin == std::string_view::npos || end == std::string_view::npos || end <= begin)
        fail(Errc::BadValue, "missing PEM armor");
    std::string_view body = text.substr(begin + kBegin.size(), end - begin - kBegin.size());
    return decode_certificate(as_span(base64_decode(body)));
}

}  // namespace pqkex

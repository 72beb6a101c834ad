#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pqkex/certificates.hpp"
#include "pqkex/der.hpp"
#include "pqkex/errors.hpp"
#include "support.hpp"

using namespace pqkex;
using namespace pqkex::test;

namespace {

Errc validate_code(const Bytes& der, ByteSpan ca_public, int64_t now) {
    try {
        validate(decode_certificate(as_span(der)), ca_public, now);
        return Errc::BadValue;  // "accepted", never expected here
    } catch (const Error& e) {
        return e.code();
    }
}

}  // namespace

TEST_CASE("issue/validate round-trip extracts the right keys per scheme") {
    Suite suite = l1_mldsa();
    const CaContext& ca = test_ca(suite);
    DeterministicRandom rng(uint64_t{100});
    DsaKeyPair dsa = dsa_keygen(suite.dsa, rng);
    KemKeyPair kem = kem_keygen(suite.kem, rng);

    for (CertScheme scheme : {CertScheme::Composite, CertScheme::Catalyst,
                              CertScheme::Chameleon}) {
        Certificate cert = issue(ca, cert_template("Alice", 10), scheme, dsa.public_key,
                                 kem.public_key);
        CHECK(cert.scheme == scheme);
        ExtractedKeys keys = validate(cert, test_ca_public(suite), kNow);
        CHECK(keys.dsa_public == dsa.public_key);
        REQUIRE(keys.kem_public.has_value());
        CHECK(*keys.kem_public == kem.public_key);
    }

    Certificate pure_dsa =
        issue(ca, cert_template("Alice", 11), CertScheme::PureDsa, dsa.public_key, std::nullopt);
    ExtractedKeys dsa_keys = validate(pure_dsa, test_ca_public(suite), kNow);
    CHECK(dsa_keys.dsa_public == dsa.public_key);
    CHECK_FALSE(dsa_keys.kem_public.has_value());

    Certificate pure_kem =
        issue(ca, cert_template("Alice", 12), CertScheme::PureKem, std::nullopt, kem.public_key);
    ExtractedKeys kem_keys = validate(pure_kem, test_ca_public(suite), kNow);
    CHECK(kem_keys.dsa_public.empty());
    REQUIRE(kem_keys.kem_public.has_value());
    CHECK(*kem_keys.kem_public == kem.public_key);
}

TEST_CASE("issuance preconditions") {
    Suite suite = l1_mldsa();
    const CaContext& ca = test_ca(suite);
    DeterministicRandom rng(uint64_t{101});
    DsaKeyPair dsa = dsa_keygen(suite.dsa, rng);
    KemKeyPair kem = kem_keygen(suite.kem, rng);
    CertTemplate tmpl = cert_template("Alice", 20);

    // Dual schemes need both keys; pure schemes reject the extra key.
    CHECK_THROWS_AS(issue(ca, tmpl, CertScheme::Composite, dsa.public_key, std::nullopt), Error);
    CHECK_THROWS_AS(issue(ca, tmpl, CertScheme::Catalyst, std::nullopt, kem.public_key), Error);
    CHECK_THROWS_AS(issue(ca, tmpl, CertScheme::PureDsa, dsa.public_key, kem.public_key), Error);
    CHECK_THROWS_AS(issue(ca, tmpl, CertScheme::PureKem, dsa.public_key, kem.public_key), Error);

    // Template invariants.
    CertTemplate bad = tmpl;
    bad.not_after = bad.not_before;
    CHECK_THROWS_AS(issue(ca, bad, CertScheme::PureDsa, dsa.public_key, std::nullopt), Error);
    bad = tmpl;
    bad.subject_common_name.clear();
    CHECK_THROWS_AS(issue(ca, bad, CertScheme::PureDsa, dsa.public_key, std::nullopt), Error);
    bad = tmpl;
    bad.serial = Bytes(21, 0x22);
    CHECK_THROWS_AS(issue(ca, bad, CertScheme::PureDsa, dsa.public_key, std::nullopt), Error);
    bad = tmpl;
    bad.serial = {0x80, 0x01};  // negative
    CHECK_THROWS_AS(issue(ca, bad, CertScheme::PureDsa, dsa.public_key, std::nullopt), Error);

    // Wrong key size.
    Bytes short_key(dsa.public_key.begin(), dsa.public_key.end() - 1);
    CHECK_THROWS_AS(issue(ca, tmpl, CertScheme::PureDsa, short_key, std::nullopt), Error);
}

TEST_CASE("decode -> re-encode is byte identity") {
    Suite suite = l1_mldsa();
    for (CertScheme scheme : {CertScheme::Composite, CertScheme::Catalyst, CertScheme::Chameleon,
                              CertScheme::PureDsa}) {
        CertScheme party_scheme =
            scheme == CertScheme::PureDsa ? CertScheme::PureDsa : scheme;
        const auto& [alice, bob] = test_parties(suite, party_scheme);
        for (const Certificate& cert : alice.certificates) {
            Certificate reparsed = decode_certificate(as_span(cert.encoded));
            CHECK(reparsed.encoded == cert.encoded);
            CHECK(der::encode(der::decode(as_span(cert.encoded))) == cert.encoded);
            CHECK(reparsed.scheme == cert.scheme);
            CHECK(reparsed.serial == cert.serial);
        }
        (void)bob;
    }
}

TEST_CASE("validity window errors") {
    Suite suite = l1_mldsa();
    const auto& [alice, bob] = test_parties(suite, CertScheme::Composite);
    const Certificate& cert = alice.certificates[0];
    CHECK_THROWS_WITH_AS(validate(cert, test_ca_public(suite), kNotBefore - 1),
                         doctest::Contains("NotYetValid"), Error);
    CHECK_THROWS_WITH_AS(validate(cert, test_ca_public(suite), kNotAfter + 1),
                         doctest::Contains("Expired"), Error);
    (void)bob;
}

TEST_CASE("single-byte tampers are rejected with BadCaSignature") {
    Suite suite = l1_mldsa();
    const auto& [alice, bob] = test_parties(suite, CertScheme::Chameleon);
    const Certificate& cert = alice.certificates[0];
    ByteSpan ca_public = test_ca_public(suite);

    // Key material (covered by the CA signature).
    CHECK(validate_code(flip_inside(cert.encoded, as_span(cert.dsa_public), 10), ca_public,
                        kNow) == Errc::BadCaSignature);
    CHECK(validate_code(flip_inside(cert.encoded, as_span(cert.kem_public), 10), ca_public,
                        kNow) == Errc::BadCaSignature);
    // The outer CA signature itself.
    CHECK(validate_code(flip_inside(cert.encoded, as_span(cert.ca_signature), 100), ca_public,
                        kNow) == Errc::BadCaSignature);
    // The delta certificate's signature (the second CA signature).
    CHECK(validate_code(flip_inside(cert.encoded, as_span(cert.delta_signature), 100), ca_public,
                        kNow) == Errc::BadCaSignature);
    (void)bob;
}

TEST_CASE("wrong CA key rejects") {
    Suite suite = l1_mldsa();
    const auto& [alice, bob] = test_parties(suite, CertScheme::Composite);
    DeterministicRandom rng(uint64_t{102});
    DsaKeyPair other_ca = dsa_keygen(suite.dsa, rng);
    CHECK_THROWS_WITH_AS(validate(alice.certificates[0], as_span(other_ca.public_key), kNow),
                         doctest::Contains("BadCaSignature"), Error);
    (void)bob;
}

TEST_CASE("scheme length ordering and deltas") {
    // composite < catalyst < chameleon < pure pair, at every level.
    for (SecurityLevel level : kAllLevels) {
        Suite suite = suite_for(level, DsaFamily::MlDsa);
        const auto& [composite_a, composite_b] = test_parties(suite, CertScheme::Composite);
        const auto& [catalyst_a, catalyst_b] = test_parties(suite, CertScheme::Catalyst);
        const auto& [chameleon_a, chameleon_b] = test_parties(suite, CertScheme::Chameleon);
        const auto& [pure_a, pure_b] = test_parties(suite, CertScheme::PureDsa);

        size_t composite = encoded_length(composite_a.certificates[0]);
        size_t catalyst = encoded_length(catalyst_a.certificates[0]);
        size_t chameleon = encoded_length(chameleon_a.certificates[0]);
        size_t pure_sum = encoded_length(pure_a.certificates[0]) +
                          encoded_length(pure_a.certificates[1]);
        CHECK(composite < catalyst);
        CHECK(catalyst < chameleon);
        CHECK(chameleon < pure_sum);
        CHECK(encoded_length(pure_a.certificates[0]) < composite);
        (void)composite_b;
        (void)catalyst_b;
        (void)chameleon_b;
        (void)pure_b;
    }

    // catalyst - composite is one constant across the three levels.
    std::optional<long> gap;
    for (SecurityLevel level : kAllLevels) {
        Suite suite = suite_for(level, DsaFamily::MlDsa);
        long delta = static_cast<long>(
                         encoded_length(test_parties(suite, CertScheme::Catalyst)
                                            .first.certificates[0])) -
                     static_cast<long>(encoded_length(
                         test_parties(suite, CertScheme::Composite).first.certificates[0]));
        CHECK(delta > 0);
        CHECK(delta <= 64);
        if (!gap) gap = delta;
        CHECK(*gap == delta);
    }
}

TEST_CASE("PEM armor round-trips") {
    Suite suite = l1_mldsa();
    const auto& [alice, bob] = test_parties(suite, CertScheme::Catalyst);
    std::string pem = to_pem(alice.certificates[0]);
    CHECK(pem.rfind("-----BEGIN PQC CERTIFICATE-----", 0) == 0);
    Certificate back = from_pem(pem);
    CHECK(back.encoded == alice.certificates[0].encoded);
    (void)bob;
}

TEST_CASE("unknown key algorithm is UnknownScheme") {
    Suite suite = l1_mldsa();
    const auto& [alice, bob] = test_parties(suite, CertScheme::PureDsa);
    const Certificate& cert = alice.certificates[0];
    // Patch the SPKI algorithm OID leaf (inside the DSA OID) to an
    // unassigned value; the certificate parses but the key is unknown.
    der::Oid dsa_oid{{2, 16, 840, 1, 101, 3, 4, 3, 17}};
    Bytes oid_value = dsa_oid.encode_value();
    // Second occurrence is the SPKI algorithm (first is the TBS sig alg,
    // third the outer): flip in a copy located after the validity field.
    Bytes patched = cert.encoded;
    size_t first = std::string(patched.begin(), patched.end())
                       .find(std::string(oid_value.begin(), oid_value.end()));
    REQUIRE(first != std::string::npos);
    size_t second = std::string(patched.begin(), patched.end())
                        .find(std::string(oid_value.begin(), oid_value.end()), first + 1);
    REQUIRE(second != std::string::npos);
    patched[second + oid_value.size() - 1] = 99;  // 2.16.840.1.101.3.4.3.99
    try {
        decode_certificate(as_span(patched));
        FAIL("expected UnknownScheme");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnknownScheme);
    }
    (void)bob;
}

TEST_CASE("chameleon validates both signatures; delta serial differs") {
    Suite suite = l3_mldsa();
    const auto& [alice, bob] = test_parties(suite, CertScheme::Chameleon);
    const Certificate& cert = alice.certificates[0];
    CHECK(cert.delta_serial != cert.serial);
    CHECK(cert.delta_signature.size() == params(cert.ca_algorithm).signature_bytes);
    validate(cert, test_ca_public(suite), kNow);
    (void)bob;
}

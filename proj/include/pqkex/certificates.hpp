#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pqkex/bytes.hpp"
#include "pqkex/crypto.hpp"
#include "pqkex/suite.hpp"

namespace pqkex {

enum class CertScheme { Composite, Catalyst, Chameleon, PureDsa, PureKem };

const char* scheme_name(CertScheme scheme);
std::optional<CertScheme> parse_scheme(std::string_view name);

struct CertTemplate {
    std::string subject_common_name;
    std::string issuer_common_name;
    Bytes serial;  // positive INTEGER content octets, at most 20
    int64_t not_before = 0;
    int64_t not_after = 0;
};

struct Certificate {
    CertScheme scheme = CertScheme::PureDsa;

    Bytes serial;
    std::string subject_common_name;
    std::string issuer_common_name;
    int64_t not_before = 0;
    int64_t not_after = 0;

    DsaAlgorithm ca_algorithm = DsaAlgorithm::MlDsa44;  // certificate signature algorithm

    std::optional<DsaAlgorithm> dsa_algorithm;
    Bytes dsa_public;
    std::optional<KemAlgorithm> kem_algorithm;
    Bytes kem_public;

    // Chameleon only: the delta certificate's serial and CA signature. The
    // rest of the delta certificate is reconstructed from the host fields.
    Bytes delta_serial;
    Bytes delta_signature;

    Bytes ca_signature;
    Bytes tbs_encoded;  // exact to-be-signed octets
    Bytes encoded;      // canonical DER of the full certificate
};

/// Keys a validated certificate (or certificate list) hands to the protocol.
struct ExtractedKeys {
    std::optional<DsaAlgorithm> dsa_algorithm;
    Bytes dsa_public;
    std::optional<KemAlgorithm> kem_algorithm;
    std::optional<Bytes> kem_public;
};

struct CaContext {
    Suite suite;
    DsaKeyPair ca_keys;
    Certificate ca_certificate;  // self-signed, PureDsa
};

/// Self-signed PureDsa CA at the suite's level.
CaContext make_ca(const Suite& suite, const CertTemplate& tmpl, RandomSource& rng);

/// Issues one certificate. Dual-usage schemes require both keys, PureDsa
/// only dsa_public, PureKem only kem_public; anything else is MissingKey /
/// BadTemplate. Chameleon consumes a second serial for the delta
/// certificate (caller's serial with the top bit of the last byte flipped).
Certificate issue(const CaContext& ca, const CertTemplate& tmpl, CertScheme scheme,
                  const std::optional<Bytes>& dsa_public, const std::optional<Bytes>& kem_public);

/// Full check: parseable, inside the validity window, CA signature(s) good
/// (both of them for Chameleon). Returns the carried public keys.
ExtractedKeys validate(const Certificate& cert, ByteSpan ca_public, int64_t now);

Certificate decode_certificate(ByteSpan der);

inline size_t encoded_length(const Certificate& cert) { return cert.encoded.size(); }

std::string to_pem(const Certificate& cert);
Certificate from_pem(std::string_view text);

}  // namespace pqkex

#pragma once

// Shared fixtures for the test suites: deterministic CAs and credentials
// (cached, since SLH-DSA key material is expensive), fixed timestamps, and
// byte-tampering helpers for the adversarial tests.

#include <map>
#include <stdexcept>
#include <string>

#include "pqkex/benchmark.hpp"
#include "pqkex/handshake.hpp"
#include "pqkex/rng.hpp"

namespace pqkex::test {

inline constexpr int64_t kNotBefore = 1735689600;  // 2025-01-01T00:00:00Z
inline constexpr int64_t kNotAfter = 2051222400;   // 2035-01-01T00:00:00Z
inline constexpr int64_t kNow = 1748736000;        // 2025-06-01T00:00:00Z

inline Bytes serial_from(uint8_t low) { return Bytes{0x41, 0, 0, 0, 0, 0, 0, low}; }

inline CertTemplate cert_template(const std::string& subject, uint8_t serial_low) {
    return CertTemplate{subject, "PQC Root CA", serial_from(serial_low), kNotBefore, kNotAfter};
}

inline const CaContext& test_ca(const Suite& suite, uint64_t seed = 7) {
    static std::map<std::pair<unsigned, uint64_t>, CaContext> cache;
    auto key = std::make_pair(suite_index(suite), seed);
    auto it = cache.find(key);
    if (it == cache.end()) {
        DeterministicRandom rng(seed);
        it = cache.emplace(key, make_ca(suite, cert_template("PQC Root CA", 1), rng)).first;
    }
    return it->second;
}

struct TestParty {
    Credential credential;
};

/// Alice (initiator) and Bob (responder) credentials for a scheme; Compared
/// mode is requested with CertScheme::PureDsa.
inline const std::pair<Credential, Credential>& test_parties(const Suite& suite,
                                                             CertScheme scheme,
                                                             uint64_t seed = 7) {
    static std::map<std::tuple<unsigned, int, uint64_t>, std::pair<Credential, Credential>>
        cache;
    auto key = std::make_tuple(suite_index(suite), static_cast<int>(scheme), seed);
    auto it = cache.find(key);
    if (it == cache.end()) {
        const CaContext& ca = test_ca(suite, seed);
        DeterministicRandom rng(seed * 31 + static_cast<uint64_t>(scheme));
        std::pair<Credential, Credential> parties;
        if (scheme == CertScheme::PureDsa) {
            parties.first = make_pure_credential(ca, cert_template("Alice", 2), rng);
            parties.second = make_pure_credential(ca, cert_template("Bob", 3), rng);
        } else {
            parties.first = make_dual_credential(ca, scheme, cert_template("Alice", 2), rng);
            parties.second = make_dual_credential(ca, scheme, cert_template("Bob", 3), rng);
        }
        it = cache.emplace(key, std::move(parties)).first;
    }
    return it->second;
}

inline ByteSpan test_ca_public(const Suite& suite, uint64_t seed = 7) {
    return as_span(test_ca(suite, seed).ca_keys.public_key);
}

/// Flips one byte of `needle` (located inside `haystack`) at `offset` into
/// the needle. Throws if the needle is not found exactly once-ish (first
/// occurrence is used; key material makes collisions vanishingly unlikely).
inline Bytes flip_inside(const Bytes& haystack, ByteSpan needle, size_t offset) {
    if (needle.empty() || offset >= needle.size()) throw std::runtime_error("bad tamper spec");
    auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end());
    if (it == haystack.end()) throw std::runtime_error("tamper target not found");
    Bytes out = haystack;
    out[static_cast<size_t>(it - haystack.begin()) + offset] ^= 0x01;
    return out;
}

inline Bytes flip_at(const Bytes& data, size_t offset) {
    Bytes out = data;
    out.at(offset) ^= 0x01;
    return out;
}

inline Suite l1_mldsa() { return suite_for(SecurityLevel::L1, DsaFamily::MlDsa); }
inline Suite l3_mldsa() { return suite_for(SecurityLevel::L3, DsaFamily::MlDsa); }

}  // namespace pqkex::test

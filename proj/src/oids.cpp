#include "pqkex/oids.hpp"

namespace pqkex::oids {

namespace {

// NIST CSOR sigAlgs / kems arcs.
constexpr uint32_t kSigArc = 3;
constexpr uint32_t kKemArc = 4;

uint32_t dsa_leaf(DsaAlgorithm alg) {
    switch (alg) {
        case DsaAlgorithm::MlDsa44: return 17;
        case DsaAlgorithm::MlDsa65: return 18;
        case DsaAlgorithm::MlDsa87: return 19;
        // SLH-DSA, SHAKE parameter sets.
        case DsaAlgorithm::SlhDsa128s: return 26;
        case DsaAlgorithm::SlhDsa128f: return 27;
        case DsaAlgorithm::SlhDsa192s: return 28;
        case DsaAlgorithm::SlhDsa192f: return 29;
        case DsaAlgorithm::SlhDsa256s: return 30;
        case DsaAlgorithm::SlhDsa256f: return 31;
    }
    return 0;
}

}  // namespace

der::Oid dsa_oid(DsaAlgorithm alg) {
    return der::Oid{{2, 16, 840, 1, 101, 3, 4, kSigArc, dsa_leaf(alg)}};
}

der::Oid kem_oid(KemAlgorithm alg) {
    uint32_t leaf = static_cast<uint32_t>(alg) + 1;  // ml-kem-512/768/1024 = .1/.2/.3
    return der::Oid{{2, 16, 840, 1, 101, 3, 4, kKemArc, leaf}};
}

der::Oid combined_key_oid(const Suite& suite) {
    return der::Oid{{1, 3, 6, 1, 4, 1, 55555, 1, 1, suite_index(suite)}};
}

std::optional<DsaAlgorithm> dsa_from_oid(const der::Oid& oid) {
    for (int i = 0; i < 9; ++i) {
        auto alg = static_cast<DsaAlgorithm>(i);
        if (oid == dsa_oid(alg)) return alg;
    }
    return std::nullopt;
}

std::optional<KemAlgorithm> kem_from_oid(const der::Oid& oid) {
    for (int i = 0; i < 3; ++i) {
        auto alg = static_cast<KemAlgorithm>(i);
        if (oid == kem_oid(alg)) return alg;
    }
    return std::nullopt;
}

std::optional<Suite> suite_from_combined_key_oid(const der::Oid& oid) {
    if (oid.arcs.size() != 10) return std::nullopt;
    der::Oid prefix{{oid.arcs.begin(), oid.arcs.end() - 1}};
    der::Oid expected{{1, 3, 6, 1, 4, 1, 55555, 1, 1}};
    if (prefix != expected) return std::nullopt;
    return suite_from_index(oid.arcs.back());
}

}  // namespace pqkex::oids

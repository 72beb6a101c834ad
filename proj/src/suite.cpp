#include "pqkex/suite.hpp"

#include "pqkex/errors.hpp"

namespace pqkex {

namespace {

// FIPS 204 / FIPS 205 (SHAKE, simple) parameter sizes.
constexpr DsaParams kDsaParams[] = {
    {"ML-DSA-44", "MLDSA44 ", 1312, 2560, 2420},
    {"ML-DSA-65", "MLDSA65 ", 1952, 4032, 3309},
    {"ML-DSA-87", "MLDSA87 ", 2592, 4896, 4627},
    {"SLH-DSA-128s", "SLHD128S", 32, 64, 7856},
    {"SLH-DSA-192s", "SLHD192S", 48, 96, 16224},
    {"SLH-DSA-256s", "SLHD256S", 64, 128, 29792},
    {"SLH-DSA-128f", "SLHD128F", 32, 64, 17088},
    {"SLH-DSA-192f", "SLHD192F", 48, 96, 35664},
    {"SLH-DSA-256f", "SLHD256F", 64, 128, 49856},
};

// FIPS 203 parameter sizes.
constexpr KemParams kKemParams[] = {
    {"ML-KEM-512", "MLKEM512", 800, 1632, 768, 32},
    {"ML-KEM-768", "MLKEM768", 1184, 2400, 1088, 32},
    {"ML-KEM-1024", "MLKEM1K ", 1568, 3168, 1568, 32},
};

}  // namespace

const DsaParams& params(DsaAlgorithm alg) { return kDsaParams[static_cast<int>(alg)]; }
const KemParams& params(KemAlgorithm alg) { return kKemParams[static_cast<int>(alg)]; }

Suite suite_for(SecurityLevel level, DsaFamily family) {
    static constexpr DsaAlgorithm kDsaByFamilyLevel[3][3] = {
        {DsaAlgorithm::MlDsa44, DsaAlgorithm::MlDsa65, DsaAlgorithm::MlDsa87},
        {DsaAlgorithm::SlhDsa128s, DsaAlgorithm::SlhDsa192s, DsaAlgorithm::SlhDsa256s},
        {DsaAlgorithm::SlhDsa128f, DsaAlgorithm::SlhDsa192f, DsaAlgorithm::SlhDsa256f},
    };
    return Suite{level, kDsaByFamilyLevel[static_cast<int>(family)][static_cast<int>(level)],
                 kem_for_level(level)};
}

SecurityLevel level_of(DsaAlgorithm alg) {
    switch (alg) {
        case DsaAlgorithm::MlDsa44:
        case DsaAlgorithm::SlhDsa128s:
        case DsaAlgorithm::SlhDsa128f: return SecurityLevel::L1;
        case DsaAlgorithm::MlDsa65:
        case DsaAlgorithm::SlhDsa192s:
        case DsaAlgorithm::SlhDsa192f: return SecurityLevel::L3;
        case DsaAlgorithm::MlDsa87:
        case DsaAlgorithm::SlhDsa256s:
        case DsaAlgorithm::SlhDsa256f: return SecurityLevel::L5;
    }
    fail(Errc::BadValue, "unknown DSA algorithm");
}

DsaFamily family_of(DsaAlgorithm alg) {
    switch (alg) {
        case DsaAlgorithm::MlDsa44:
        case DsaAlgorithm::MlDsa65:
        case DsaAlgorithm::MlDsa87: return DsaFamily::MlDsa;
        case DsaAlgorithm::SlhDsa128s:
        case DsaAlgorithm::SlhDsa192s:
        case DsaAlgorithm::SlhDsa256s: return DsaFamily::SlhDsaSmall;
        case DsaAlgorithm::SlhDsa128f:
        case DsaAlgorithm::SlhDsa192f:
        case DsaAlgorithm::SlhDsa256f: return DsaFamily::SlhDsaFast;
    }
    fail(Errc::BadValue, "unknown DSA algorithm");
}

KemAlgorithm kem_for_level(SecurityLevel level) {
    switch (level) {
        case SecurityLevel::L1: return KemAlgorithm::MlKem512;
        case SecurityLevel::L3: return KemAlgorithm::MlKem768;
        case SecurityLevel::L5: return KemAlgorithm::MlKem1024;
    }
    fail(Errc::BadValue, "unknown security level");
}

unsigned suite_index(const Suite& suite) {
    return static_cast<unsigned>(family_of(suite.dsa)) * 3 +
           static_cast<unsigned>(suite.level) + 1;
}

std::optional<Suite> suite_from_index(unsigned index) {
    if (index < 1 || index > 9) return std::nullopt;
    unsigned zero = index - 1;
    return suite_for(static_cast<SecurityLevel>(zero % 3), static_cast<DsaFamily>(zero / 3));
}

const char* level_name(SecurityLevel level) {
    switch (level) {
        case SecurityLevel::L1: return "L1";
        case SecurityLevel::L3: return "L3";
        case SecurityLevel::L5: return "L5";
    }
    return "?";
}

const char* family_name(DsaFamily family) {
    switch (family) {
        case DsaFamily::MlDsa: return "mldsa";
        case DsaFamily::SlhDsaSmall: return "slhdsa-s";
        case DsaFamily::SlhDsaFast: return "slhdsa-f";
    }
    return "?";
}

std::optional<DsaFamily> parse_family(std::string_view name) {
    for (DsaFamily family : kAllFamilies)
        if (name == family_name(family)) return family;
    return std::nullopt;
}

std::string suite_name(const Suite& suite) {
    std::string out = level_name(suite.level);
    out[0] = 'l';  // "l1" / "l3" / "l5"
    out += "-";
    out += family_name(family_of(suite.dsa));
    return out;
}

std::optional<Suite> parse_suite(std::string_view name) {
    size_t dash = name.find('-');
    if (dash == std::string_view::npos) return std::nullopt;
    std::string_view level_part = name.substr(0, dash);
    std::string_view family_part = name.substr(dash + 1);
    SecurityLevel level;
    if (level_part == "l1") level = SecurityLevel::L1;
    else if (level_part == "l3") level = SecurityLevel::L3;
    else if (level_part == "l5") level = SecurityLevel::L5;
    else return std::nullopt;
    auto family = parse_family(family_part);
    if (!family) return std::nullopt;
    return suite_for(level, *family);
}

}  // namespace pqkex

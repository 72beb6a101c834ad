#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace pqkex {

enum class SecurityLevel { L1, L3, L5 };

enum class DsaFamily { MlDsa, SlhDsaSmall, SlhDsaFast };

enum class DsaAlgorithm {
    MlDsa44,
    MlDsa65,
    MlDsa87,
    SlhDsa128s,
    SlhDsa192s,
    SlhDsa256s,
    SlhDsa128f,
    SlhDsa192f,
    SlhDsa256f,
};

enum class KemAlgorithm { MlKem512, MlKem768, MlKem1024 };

struct DsaParams {
    const char* name;      // display name, e.g. "ML-DSA-65"
    const char* file_tag;  // 8-char ASCII tag used in key files
    size_t public_key_bytes;
    size_t secret_key_bytes;
    size_t signature_bytes;
};

struct KemParams {
    const char* name;
    const char* file_tag;
    size_t public_key_bytes;
    size_t secret_key_bytes;
    size_t ciphertext_bytes;
    size_t shared_secret_bytes;  // 32 for every ML-KEM parameter set
};

const DsaParams& params(DsaAlgorithm alg);
const KemParams& params(KemAlgorithm alg);

struct Suite {
    SecurityLevel level;
    DsaAlgorithm dsa;
    KemAlgorithm kem;

    bool operator==(const Suite&) const = default;
};

/// The nine (level, family) pairings; total over both enumerations.
Suite suite_for(SecurityLevel level, DsaFamily family);

SecurityLevel level_of(DsaAlgorithm alg);
DsaFamily family_of(DsaAlgorithm alg);
KemAlgorithm kem_for_level(SecurityLevel level);

/// Stable 1..9 index identifying the pairing (used by the combined-key OID).
unsigned suite_index(const Suite& suite);
std::optional<Suite> suite_from_index(unsigned index);

std::string suite_name(const Suite& suite);          // e.g. "l3-mldsa"
std::optional<Suite> parse_suite(std::string_view);  // inverse of suite_name

const char* level_name(SecurityLevel level);    // "L1" / "L3" / "L5"
const char* family_name(DsaFamily family);      // "mldsa" / "slhdsa-s" / "slhdsa-f"
std::optional<DsaFamily> parse_family(std::string_view name);

inline constexpr std::array<SecurityLevel, 3> kAllLevels = {SecurityLevel::L1, SecurityLevel::L3,
                                                            SecurityLevel::L5};
inline constexpr std::array<DsaFamily, 3> kAllFamilies = {DsaFamily::MlDsa, DsaFamily::SlhDsaSmall,
                                                          DsaFamily::SlhDsaFast};

}  // namespace pqkex

#pragma once

#include <optional>

#include "pqkex/der.hpp"
#include "pqkex/suite.hpp"

namespace pqkex::oids {

// NIST CSOR identifiers for the standardized algorithms; a private
// experimental arc for everything the figures mark "need to be
// standardized" (combined keys, the dual-usage extensions, the three
// content types). The full table lives in docs/wire_format.md.

inline const der::Oid kShake256{{2, 16, 840, 1, 101, 3, 4, 2, 12}};
inline const der::Oid kCommonName{{2, 5, 4, 3}};
inline const der::Oid kPkcs9MessageDigest{{1, 2, 840, 113549, 1, 9, 4}};
inline const der::Oid kPkcs9SigningTime{{1, 2, 840, 113549, 1, 9, 5}};

// 1.3.6.1.4.1.55555 — experimental arc for this toolkit.
inline const der::Oid kAltPublicKeyExtension{{1, 3, 6, 1, 4, 1, 55555, 1, 2}};
inline const der::Oid kDeltaCertificateExtension{{1, 3, 6, 1, 4, 1, 55555, 1, 3}};
inline const der::Oid kContentKepReq{{1, 3, 6, 1, 4, 1, 55555, 2, 1}};
inline const der::Oid kContentKepResp{{1, 3, 6, 1, 4, 1, 55555, 2, 2}};
inline const der::Oid kContentKepAck{{1, 3, 6, 1, 4, 1, 55555, 2, 3}};

der::Oid dsa_oid(DsaAlgorithm alg);
der::Oid kem_oid(KemAlgorithm alg);
/// 1.3.6.1.4.1.55555.1.1.<suite index> — identifies the DSA+KEM combination
/// carried in a composite certificate's public-key field.
der::Oid combined_key_oid(const Suite& suite);

std::optional<DsaAlgorithm> dsa_from_oid(const der::Oid& oid);
std::optional<KemAlgorithm> kem_from_oid(const der::Oid& oid);
std::optional<Suite> suite_from_combined_key_oid(const der::Oid& oid);

}  // namespace pqkex::oids

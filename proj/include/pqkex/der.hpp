#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "pqkex/bytes.hpp"

namespace pqkex::der {

// Definite-length DER subset: the universal types used by the certificate
// and SignedData structures plus context-specific constructed tags 0-3.
// Canonical both ways: decode(encode(n)) == n and encode(decode(b)) == b.

enum class TagClass : uint8_t { Universal = 0, ContextSpecific = 2 };

struct Tag {
    TagClass cls = TagClass::Universal;
    bool constructed = false;
    uint32_t number = 0;

    auto operator<=>(const Tag&) const = default;
};

namespace tags {
inline constexpr Tag Boolean{TagClass::Universal, false, 1};
inline constexpr Tag Integer{TagClass::Universal, false, 2};
inline constexpr Tag BitString{TagClass::Universal, false, 3};
inline constexpr Tag OctetString{TagClass::Universal, false, 4};
inline constexpr Tag Null{TagClass::Universal, false, 5};
inline constexpr Tag ObjectId{TagClass::Universal, false, 6};
inline constexpr Tag Utf8String{TagClass::Universal, false, 12};
inline constexpr Tag Sequence{TagClass::Universal, true, 16};
inline constexpr Tag Set{TagClass::Universal, true, 17};
inline constexpr Tag GeneralizedTime{TagClass::Universal, false, 24};

inline constexpr Tag context(uint32_t n) { return Tag{TagClass::ContextSpecific, true, n}; }
}  // namespace tags

struct Oid {
    std::vector<uint32_t> arcs;

    auto operator<=>(const Oid&) const = default;
    std::string to_string() const;  // dotted form

    Bytes encode_value() const;  // base-128 content octets, no header
    static Oid decode_value(ByteSpan content);
};

struct TlvNode {
    Tag tag;
    Bytes value;                    // primitive content octets
    std::vector<TlvNode> children;  // constructed content, in order

    bool operator==(const TlvNode&) const = default;
};

Bytes encode(const TlvNode& node);
size_t encoded_length(const TlvNode& node);

/// Decodes exactly one TLV covering the whole input. Truncation, trailing
/// bytes, indefinite lengths and non-minimal lengths are distinct errors.
TlvNode decode(ByteSpan input);

std::string dump(const TlvNode& node);  // indented tree for `decode --dump`

// ----- builders -----

TlvNode sequence(std::vector<TlvNode> children);
TlvNode set(std::vector<TlvNode> children);
TlvNode context(uint32_t number, std::vector<TlvNode> children);
TlvNode boolean(bool v);
TlvNode integer(int64_t v);
TlvNode integer(ByteSpan content);  // caller supplies minimal two's-complement octets
TlvNode octet_string(ByteSpan data);
TlvNode bit_string(ByteSpan data);  // zero unused bits
TlvNode null();
TlvNode object_id(const Oid& oid);
TlvNode utf8_string(std::string_view text);
TlvNode generalized_time(int64_t unix_seconds);  // YYYYMMDDHHMMSSZ, UTC

// ----- readers (throw Errc::BadValue / BadTag on shape mismatch) -----

const TlvNode& child(const TlvNode& node, size_t index);
void expect_tag(const TlvNode& node, Tag tag, const char* what);
int64_t read_small_integer(const TlvNode& node);
Bytes read_integer_content(const TlvNode& node);
Oid read_oid(const TlvNode& node);
Bytes read_bit_string(const TlvNode& node);  // requires zero unused bits
int64_t read_generalized_time(const TlvNode& node);
std::string read_utf8_string(const TlvNode& node);

}  // namespace pqkex::der

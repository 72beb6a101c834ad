#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pqkex {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline ByteSpan as_span(const Bytes& b) {
    return ByteSpan(b.data(), b.size());
}

std::string hex_encode(ByteSpan data);
Bytes hex_decode(std::string_view hex);

/// Constant-time equality; returns false on length mismatch.
bool ct_equal(ByteSpan a, ByteSpan b);

std::string base64_encode(ByteSpan data);
Bytes base64_decode(std::string_view text);

}  // namespace pqkex

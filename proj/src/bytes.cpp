#include "pqkex/bytes.hpp"

#include "pqkex/errors.hpp"

namespace pqkex {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

constexpr char kB64Digits[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}
}  // namespace

std::string hex_encode(ByteSpan data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0F]);
    }
    return out;
}

Bytes hex_decode(std::string_view hex) {
    if (hex.size() % 2 != 0) fail(Errc::BadValue, "odd-length hex string");
    Bytes out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) fail(Errc::BadValue, "invalid hex digit");
        out[i] = static_cast<uint8_t>((hi << 4) | lo);
    }
    return out;
}

bool ct_equal(ByteSpan a, ByteSpan b) {
    if (a.size() != b.size()) return false;
    uint8_t acc = 0;
    for (size_t i = 0; i < a.size(); ++i) acc |= static_cast<uint8_t>(a[i] ^ b[i]);
    return acc == 0;
}

std::string base64_encode(ByteSpan data) {
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    size_t i = 0;
    for (; i + 3 <= data.size(); i += 3) {
        uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out.push_back(kB64Digits[(v >> 18) & 63]);
        out.push_back(kB64Digits[(v >> 12) & 63]);
        out.push_back(kB64Digits[(v >> 6) & 63]);
        out.push_back(kB64Digits[v & 63]);
    }
    size_t rest = data.size() - i;
    if (rest == 1) {
        uint32_t v = data[i] << 16;
        out.push_back(kB64Digits[(v >> 18) & 63]);
        out.push_back(kB64Digits[(v >> 12) & 63]);
        out.append("==");
    } else if (rest == 2) {
        uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
        out.push_back(kB64Digits[(v >> 18) & 63]);
        out.push_back(kB64Digits[(v >> 12) & 63]);
        out.push_back(kB64Digits[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

Bytes base64_decode(std::string_view text) {
    Bytes out;
    uint32_t acc = 0;
    int bits = 0;
    int padding = 0;
    for (char c : text) {
        if (c == '\n' || c == '\r' || c == ' ' || c == '\t') continue;
        if (c == '=') {
            ++padding;
            continue;
        }
        if (padding > 0) fail(Errc::BadValue, "base64 data after padding");
        int v = b64_value(c);
        if (v < 0) fail(Errc::BadValue, "invalid base64 character");
        acc = (acc << 6) | static_cast<uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<uint8_t>((acc >> bits) & 0xFF));
        }
    }
    return out;
}

}  // namespace pqkex

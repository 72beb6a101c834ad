#include "pqkex/der.hpp"

#include <time.h>

#include <cstdio>
#include <cstring>

#include "pqkex/errors.hpp"

namespace pqkex::der {

namespace {

constexpr size_t kMaxDepth = 64;

bool is_known_universal(uint32_t number, bool constructed) {
    switch (number) {
        case 1:   // BOOLEAN
        case 2:   // INTEGER
        case 3:   // BIT STRING
        case 4:   // OCTET STRING
        case 5:   // NULL
        case 6:   // OBJECT IDENTIFIER
        case 12:  // UTF8String
        case 24:  // GeneralizedTime
            return !constructed;
        case 16:  // SEQUENCE
        case 17:  // SET
            return constructed;
        default: return false;
    }
}

void append_length(Bytes& out, size_t len) {
    if (len < 0x80) {
        out.push_back(static_cast<uint8_t>(len));
        return;
    }
    uint8_t scratch[sizeof(size_t)];
    int n = 0;
    for (size_t v = len; v != 0; v >>= 8) scratch[n++] = static_cast<uint8_t>(v & 0xFF);
    out.push_back(static_cast<uint8_t>(0x80 | n));
    for (int i = n - 1; i >= 0; --i) out.push_back(scratch[i]);
}

size_t length_of_length(size_t len) {
    if (len < 0x80) return 1;
    size_t n = 0;
    for (size_t v = len; v != 0; v >>= 8) ++n;
    return 1 + n;
}

size_t content_length(const TlvNode& node) {
    if (!node.tag.constructed) return node.value.size();
    size_t total = 0;
    for (const TlvNode& c : node.children) total += encoded_length(c);
    return total;
}

void encode_into(const TlvNode& node, Bytes& out) {
    if (node.tag.number > 30) fail(Errc::BadTag, "multi-byte tag numbers unsupported");
    if (node.tag.constructed && !node.value.empty())
        fail(Errc::BadValue, "constructed node with primitive value");
    if (!node.tag.constructed && !node.children.empty())
        fail(Errc::BadValue, "primitive node with children");
    uint8_t head = static_cast<uint8_t>((static_cast<uint8_t>(node.tag.cls) << 6) |
                                        (node.tag.constructed ? 0x20 : 0x00) | node.tag.number);
    out.push_back(head);
    append_length(out, content_length(node));
    if (node.tag.constructed) {
        for (const TlvNode& c : node.children) encode_into(c, out);
    } else {
        out.insert(out.end(), node.value.begin(), node.value.end());
    }
}

struct Reader {
    ByteSpan data;
    size_t pos = 0;

    uint8_t byte() {
        if (pos >= data.size()) fail(Errc::TruncatedInput, "unexpected end of input");
        return data[pos++];
    }

    ByteSpan take(size_t n) {
        if (data.size() - pos < n) fail(Errc::TruncatedInput, "value extends past input");
        ByteSpan s = data.subspan(pos, n);
        pos += n;
        return s;
    }
};

size_t parse_length(Reader& r) {
    uint8_t first = r.byte();
    if (first < 0x80) return first;
    if (first == 0x80) fail(Errc::IndefiniteLength, "indefinite length");
    size_t n = first & 0x7F;
    if (n > sizeof(size_t)) fail(Errc::BadValue, "length too large");
    size_t len = 0;
    for (size_t i = 0; i < n; ++i) {
        uint8_t b = r.byte();
        if (i == 0 && b == 0) fail(Errc::NonMinimalLength, "leading zero in length");
        len = (len << 8) | b;
    }
    if (len < 0x80) fail(Errc::NonMinimalLength, "long form for short length");
    if (n > 1 && len < (static_cast<size_t>(1) << (8 * (n - 1))))
        fail(Errc::NonMinimalLength, "oversized length-of-length");
    return len;
}

TlvNode parse_node(Reader& r, size_t depth) {
    if (depth > kMaxDepth) fail(Errc::BadValue, "nesting too deep");
    uint8_t head = r.byte();
    if ((head & 0x1F) == 0x1F) fail(Errc::BadTag, "multi-byte tag numbers unsupported");
    TlvNode node;
    node.tag.constructed = (head & 0x20) != 0;
    node.tag.number = head & 0x1F;
    switch (head >> 6) {
        case 0: node.tag.cls = TagClass::Universal; break;
        case 2: node.tag.cls = TagClass::ContextSpecific; break;
        default: fail(Errc::BadTag, "unsupported tag class");
    }
    if (node.tag.cls == TagClass::Universal) {
        if (!is_known_universal(node.tag.number, node.tag.constructed))
            fail(Errc::BadTag, "unsupported universal tag");
    } else {
        if (!node.tag.constructed || node.tag.number > 3)
            fail(Errc::BadTag, "context tags are constructed 0-3");
    }
    size_t len = parse_length(r);
    ByteSpan content = r.take(len);
    if (node.tag.constructed) {
        Reader inner{content, 0};
        while (inner.pos < inner.data.size())
            node.children.push_back(parse_node(inner, depth + 1));
    } else {
        node.value.assign(content.begin(), content.end());
    }
    return node;
}

const char* universal_tag_name(uint32_t number) {
    switch (number) {
        case 1: return "BOOLEAN";
        case 2: return "INTEGER";
        case 3: return "BIT STRING";
        case 4: return "OCTET STRING";
        case 5: return "NULL";
        case 6: return "OBJECT IDENTIFIER";
        case 12: return "UTF8String";
        case 16: return "SEQUENCE";
        case 17: return "SET";
        case 24: return "GeneralizedTime";
        default: return "UNIVERSAL";
    }
}

void dump_into(const TlvNode& node, std::string& out, int indent) {
    out.append(static_cast<size_t>(indent) * 2, ' ');
    char buf[64];
    if (node.tag.cls == TagClass::Universal) {
        out += universal_tag_name(node.tag.number);
    } else {
        std::snprintf(buf, sizeof buf, "[%u]", node.tag.number);
        out += buf;
    }
    if (node.tag.constructed) {
        std::snprintf(buf, sizeof buf, " (%zu elem)", node.children.size());
        out += buf;
        out += "\n";
        for (const TlvNode& c : node.children) dump_into(c, out, indent + 1);
        return;
    }
    std::snprintf(buf, sizeof buf, " (%zu bytes)", node.value.size());
    out += buf;
    switch (node.tag.number) {
        case 6:
            try {
                out += " " + Oid::decode_value(as_span(node.value)).to_string();
            } catch (const Error&) {
                out += " <malformed>";
            }
            break;
        case 12:
        case 24:
            out += " \"";
            out.append(node.value.begin(), node.value.end());
            out += "\"";
            break;
        default: {
            size_t shown = std::min<size_t>(node.value.size(), 16);
            if (shown > 0) out += " " + hex_encode(ByteSpan(node.value.data(), shown));
            if (shown < node.value.size()) out += "...";
        }
    }
    out += "\n";
}

}  // namespace

std::string Oid::to_string() const {
    std::string out;
    for (size_t i = 0; i < arcs.size(); ++i) {
        if (i) out += ".";
        out += std::to_string(arcs[i]);
    }
    return out;
}

Bytes Oid::encode_value() const {
    if (arcs.size() < 2) fail(Errc::BadOid, "OID needs at least two arcs");
    if (arcs[0] > 2) fail(Errc::BadOid, "first OID arc must be 0, 1 or 2");
    if (arcs[0] < 2 && arcs[1] >= 40) fail(Errc::BadOid, "second OID arc out of range");
    Bytes out;
    auto push_base128 = [&out](uint64_t v) {
        uint8_t scratch[10];
        int n = 0;
        do {
            scratch[n++] = static_cast<uint8_t>(v & 0x7F);
            v >>= 7;
        } while (v != 0);
        for (int i = n - 1; i >= 1; --i) out.push_back(scratch[i] | 0x80);
        out.push_back(scratch[0]);
    };
    push_base128(static_cast<uint64_t>(arcs[0]) * 40 + arcs[1]);
    for (size_t i = 2; i < arcs.size(); ++i) push_base128(arcs[i]);
    return out;
}

Oid Oid::decode_value(ByteSpan content) {
    if (content.empty()) fail(Errc::BadOid, "empty OID");
    Oid oid;
    size_t i = 0;
    while (i < content.size()) {
        if (content[i] == 0x80) fail(Errc::BadOid, "non-minimal OID component");
        uint64_t v = 0;
        bool done = false;
        while (i < content.size()) {
            uint8_t b = content[i++];
            if (v > (UINT64_MAX >> 7)) fail(Errc::BadOid, "OID component overflow");
            v = (v << 7) | (b & 0x7F);
            if ((b & 0x80) == 0) {
                done = true;
                break;
            }
        }
        if (!done) fail(Errc::BadOid, "truncated OID component");
        if (oid.arcs.empty()) {
            uint32_t first = v >= 80 ? 2 : static_cast<uint32_t>(v / 40);
            oid.arcs.push_back(first);
            oid.arcs.push_back(static_cast<uint32_t>(v - first * 40ull));
        } else {
            if (v > UINT32_MAX) fail(Errc::BadOid, "OID component overflow");
            oid.arcs.push_back(static_cast<uint32_t>(v));
        }
    }
    return oid;
}

Bytes encode(const TlvNode& node) {
    Bytes out;
    out.reserve(encoded_length(node));
    encode_into(node, out);
    return out;
}

size_t encoded_length(const TlvNode& node) {
    size_t content = content_length(node);
    return 1 + length_of_length(content) + content;
}

TlvNode decode(ByteSpan input) {
    Reader r{input, 0};
    TlvNode node = parse_node(r, 0);
    if (r.pos != input.size()) fail(Errc::TrailingBytes, "bytes after TLV");
    return node;
}

std::string dump(const TlvNode& node) {
    std::string out;
    dump_into(node, out, 0);
    return out;
}

TlvNode sequence(std::vector<TlvNode> children) {
    TlvNode n;
    n.tag = tags::Sequence;
    n.children = std::move(children);
    return n;
}

TlvNode set(std::vector<TlvNode> children) {
    TlvNode n;
    n.tag = tags::Set;
    n.children = std::move(children);
    return n;
}

TlvNode context(uint32_t number, std::vector<TlvNode> children) {
    if (number > 3) fail(Errc::BadTag, "context tag number out of range");
    TlvNode n;
    n.tag = tags::context(number);
    n.children = std::move(children);
    return n;
}

TlvNode boolean(bool v) {
    TlvNode n;
    n.tag = tags::Boolean;
    n.value = {static_cast<uint8_t>(v ? 0xFF : 0x00)};
    return n;
}

TlvNode integer(int64_t v) {
    // Minimal two's-complement content octets, big-endian.
    uint64_t u = static_cast<uint64_t>(v);
    Bytes content(8);
    for (int i = 0; i < 8; ++i) content[7 - i] = static_cast<uint8_t>(u >> (8 * i));
    size_t start = 0;
    while (start + 1 < content.size() &&
           ((content[start] == 0x00 && (content[start + 1] & 0x80) == 0) ||
            (content[start] == 0xFF && (content[start + 1] & 0x80) != 0)))
        ++start;
    content.erase(content.begin(), content.begin() + static_cast<ptrdiff_t>(start));
    TlvNode node;
    node.tag = tags::Integer;
    node.value = std::move(content);
    return node;
}

TlvNode integer(ByteSpan content) {
    if (content.empty()) fail(Errc::BadValue, "empty INTEGER");
    if (content.size() > 1) {
        if (content[0] == 0x00 && (content[1] & 0x80) == 0)
            fail(Errc::BadValue, "non-minimal INTEGER");
        if (content[0] == 0xFF && (content[1] & 0x80) != 0)
            fail(Errc::BadValue, "non-minimal INTEGER");
    }
    TlvNode node;
    node.tag = tags::Integer;
    node.value.assign(content.begin(), content.end());
    return node;
}

TlvNode octet_string(ByteSpan data) {
    TlvNode node;
    node.tag = tags::OctetString;
    node.value.assign(data.begin(), data.end());
    return node;
}

TlvNode bit_string(ByteSpan data) {
    TlvNode node;
    node.tag = tags::BitString;
    node.value.reserve(data.size() + 1);
    node.value.push_back(0);  // unused bits
    node.value.insert(node.value.end(), data.begin(), data.end());
    return node;
}

TlvNode null() {
    TlvNode node;
    node.tag = tags::Null;
    return node;
}

TlvNode object_id(const Oid& oid) {
    TlvNode node;
    node.tag = tags::ObjectId;
    node.value = oid.encode_value();
    return node;
}

TlvNode utf8_string(std::string_view text) {
    TlvNode node;
    node.tag = tags::Utf8String;
    node.value.assign(text.begin(), text.end());
    return node;
}

TlvNode generalized_time(int64_t unix_seconds) {
    time_t t = static_cast<time_t>(unix_seconds);
    struct tm tm_utc;
    if (gmtime_r(&t, &tm_utc) == nullptr) fail(Errc::BadValue, "time out of range");
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d%02d%02d%02d%02d%02dZ", tm_utc.tm_year + 1900,
                  tm_utc.tm_mon + 1, tm_utc.tm_mday, tm_utc.tm_hour, tm_utc.tm_min,
                  tm_utc.tm_sec);
    TlvNode node;
    node.tag = tags::GeneralizedTime;
    node.value.assign(buf, buf + 15);
    return node;
}

const TlvNode& child(const TlvNode& node, size_t index) {
    if (index >= node.children.size()) fail(Errc::BadValue, "missing element");
    return node.children[index];
}

void expect_tag(const TlvNode& node, Tag tag, const char* what) {
    if (node.tag != tag) fail(Errc::BadTag, std::string("expected ") + what);
}

int64_t read_small_integer(const TlvNode& node) {
    expect_tag(node, tags::Integer, "INTEGER");
    const Bytes& v = node.value;
    if (v.empty() || v.size() > 8) fail(Errc::BadValue, "INTEGER out of range");
    int64_t out = (v[0] & 0x80) ? -1 : 0;
    for (uint8_t b : v) out = (out << 8) | b;
    return out;
}

Bytes read_integer_content(const TlvNode& node) {
    expect_tag(node, tags::Integer, "INTEGER");
    if (node.value.empty()) fail(Errc::BadValue, "empty INTEGER");
    return node.value;
}

Oid read_oid(const TlvNode& node) {
    expect_tag(node, tags::ObjectId, "OBJECT IDENTIFIER");
    return Oid::decode_value(as_span(node.value));
}

Bytes read_bit_string(const TlvNode& node) {
    expect_tag(node, tags::BitString, "BIT STRING");
    if (node.value.empty() || node.value[0] != 0)
        fail(Errc::BadValue, "BIT STRING with unused bits");
    return Bytes(node.value.begin() + 1, node.value.end());
}

int64_t read_generalized_time(const TlvNode& node) {
    expect_tag(node, tags::GeneralizedTime, "GeneralizedTime");
    if (node.value.size() != 15 || node.value[14] != 'Z')
        fail(Errc::BadValue, "GeneralizedTime must be YYYYMMDDHHMMSSZ");
    char buf[16];
    std::memcpy(buf, node.value.data(), 15);
    buf[15] = 0;
    struct tm tm_utc;
    std::memset(&tm_utc, 0, sizeof tm_utc);
    int year, mon, day, hour, min, sec;
    if (std::sscanf(buf, "%4d%2d%2d%2d%2d%2d", &year, &mon, &day, &hour, &min, &sec) != 6)
        fail(Errc::BadValue, "GeneralizedTime digits");
    tm_utc.tm_year = year - 1900;
    tm_utc.tm_mon = mon - 1;
    tm_utc.tm_mday = day;
    tm_utc.tm_hour = hour;
    tm_utc.tm_min = min;
    tm_utc.tm_sec = sec;
    time_t t = timegm(&tm_utc);
    if (t == static_cast<time_t>(-1)) fail(Errc::BadValue, "GeneralizedTime out of range");
    // Round-trips exactly; rejects things like month 13.
    if (tm_utc.tm_mon != mon - 1 || tm_utc.tm_mday != day || tm_utc.tm_hour != hour)
        fail(Errc::BadValue, "GeneralizedTime not canonical");
    return static_cast<int64_t>(t);
}

std::string read_utf8_string(const TlvNode& node) {
    expect_tag(node, tags::Utf8String, "UTF8String");
    return std::string(node.value.begin(), node.value.end());
}

}  // namespace pqkex::der

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>

#include "pqkex/der.hpp"
#include "pqkex/errors.hpp"
#include "pqkex/rng.hpp"

using namespace pqkex;
using namespace pqkex::der;

namespace {

// Random well-formed tree for the round-trip property; depth <= 8, values
// bounded so the corpus stays fast.
TlvNode random_node(RandomSource& rng, int depth) {
    uint8_t pick[2];
    rng.fill(pick);
    bool constructed = depth < 8 && (pick[0] % 3 != 0);
    if (constructed) {
        TlvNode node;
        switch (pick[1] % 3) {
            case 0: node.tag = tags::Sequence; break;
            case 1: node.tag = tags::Set; break;
            default: node.tag = tags::context(pick[1] % 4); break;
        }
        size_t n_children = pick[0] % 4;
        if (depth == 0 && n_children == 0) n_children = 1;
        for (size_t i = 0; i < n_children; ++i)
            node.children.push_back(random_node(rng, depth + 1));
        return node;
    }
    switch (pick[1] % 6) {
        case 0: {
            uint8_t raw[8];
            rng.fill(raw);
            int64_t v;
            std::memcpy(&v, raw, 8);
            return integer(v);
        }
        case 1: {
            uint8_t len;
            rng.fill({&len, 1});
            return octet_string(rng.bytes(len));
        }
        case 2: {
            uint8_t len;
            rng.fill({&len, 1});
            return bit_string(rng.bytes(len % 64));
        }
        case 3: return null();
        case 4: {
            Oid oid{{1, 3, 6, 1, 4, 1}};
            uint8_t extra[4];
            rng.fill(extra);
            oid.arcs.push_back(static_cast<uint32_t>(extra[0]) << 8 | extra[1]);
            oid.arcs.push_back(extra[2]);
            return object_id(oid);
        }
        default: {
            uint8_t len;
            rng.fill({&len, 1});
            std::string text(len % 32, 'x');
            for (char& c : text) {
                uint8_t b;
                rng.fill({&b, 1});
                c = static_cast<char>('a' + b % 26);
            }
            return utf8_string(text);
        }
    }
}

}  // namespace

TEST_CASE("golden encodings") {
    // Empty SEQUENCE and INTEGER 0 are fixed by the encoding rules.
    CHECK(hex_encode(as_span(encode(sequence({})))) == "3000");
    CHECK(hex_encode(as_span(encode(integer(int64_t{0})))) == "020100");
    CHECK(hex_encode(as_span(encode(null()))) == "0500");
    // SHAKE-256 digest OID, checked against an independent ASN.1 encoding.
    Oid shake{{2, 16, 840, 1, 101, 3, 4, 2, 12}};
    CHECK(hex_encode(as_span(encode(object_id(shake)))) == "060960864801650304020c");
    CHECK(Oid::decode_value(as_span(shake.encode_value())) == shake);
    CHECK(shake.to_string() == "2.16.840.1.101.3.4.2.12");
}

TEST_CASE("integer encodings are minimal two's complement") {
    CHECK(hex_encode(as_span(encode(integer(int64_t{127})))) == "02017f");
    CHECK(hex_encode(as_span(encode(integer(int64_t{128})))) == "02020080");
    CHECK(hex_encode(as_span(encode(integer(int64_t{256})))) == "02020100");
    CHECK(hex_encode(as_span(encode(integer(int64_t{-1})))) == "0201ff");
    CHECK(hex_encode(as_span(encode(integer(int64_t{-129})))) == "0202ff7f");
    for (int64_t v : {int64_t{0}, int64_t{1}, int64_t{-1}, int64_t{127}, int64_t{128},
                      int64_t{255}, int64_t{-32768}, int64_t{1} << 40}) {
        CHECK(read_small_integer(decode(as_span(encode(integer(v))))) == v);
    }
}

TEST_CASE("length forms") {
    // 127-byte value: short form; 128: long form with one length byte.
    Bytes b127(127, 0xAB);
    Bytes enc127 = encode(octet_string(as_span(b127)));
    CHECK(enc127.size() == 129);
    CHECK(enc127[1] == 0x7F);
    Bytes b128(128, 0xAB);
    Bytes enc128 = encode(octet_string(as_span(b128)));
    CHECK(enc128.size() == 131);
    CHECK(enc128[1] == 0x81);
    CHECK(enc128[2] == 0x80);
    Bytes b70000(70000, 0x01);
    Bytes enc70000 = encode(octet_string(as_span(b70000)));
    CHECK(enc70000[1] == 0x83);
    CHECK(decode(as_span(enc70000)).value.size() == 70000);
}

TEST_CASE("decode rejects malformed input with distinct errors") {
    auto code_of = [](const Bytes& data) {
        try {
            decode(as_span(data));
            return std::string("accepted");
        } catch (const Error& e) {
            return std::string(errc_name(e.code()));
        }
    };
    CHECK(code_of(hex_decode("30")) == "TruncatedInput");         // no length
    CHECK(code_of(hex_decode("300102")) == "TruncatedInput");     // child runs past parent
    CHECK(code_of(hex_decode("04020102ff")) == "TrailingBytes");  // extra byte after TLV
    CHECK(code_of(hex_decode("30800201000000")) == "IndefiniteLength");
    CHECK(code_of(hex_decode("04810412345678")) == "NonMinimalLength");  // long form, len < 128
    CHECK(code_of(hex_decode("0482000412345678")) == "NonMinimalLength");  // leading zero
    CHECK(code_of(hex_decode("04030102")) == "TruncatedInput");
    CHECK(code_of(hex_decode("1f8001")) == "BadTag");  // multi-byte tag number
    CHECK(code_of(hex_decode("ff0100")) == "BadTag");  // private class
    CHECK(code_of(hex_decode("0d0100")) == "BadTag");  // unknown universal
    CHECK(code_of(hex_decode("3101020100ab")) == "TruncatedInput");  // child overruns parent
}

TEST_CASE("primitive/constructed mismatches rejected") {
    // SEQUENCE must be constructed, OCTET STRING primitive.
    CHECK_THROWS_AS(decode(as_span(hex_decode("100100"))), Error);   // primitive SEQUENCE
    CHECK_THROWS_AS(decode(as_span(hex_decode("2402ab01"))), Error); // constructed OCTET STRING
}

TEST_CASE("generalized time round-trips and validates") {
    TlvNode t = generalized_time(1748736000);
    CHECK(std::string(t.value.begin(), t.value.end()) == "20250601000000Z");
    CHECK(read_generalized_time(decode(as_span(encode(t)))) == 1748736000);
    // Month 13 and truncated strings are rejected.
    TlvNode bad = t;
    bad.value[4] = '1';
    bad.value[5] = '3';
    CHECK_THROWS_AS(read_generalized_time(bad), Error);
    bad = t;
    bad.value.pop_back();
    CHECK_THROWS_AS(read_generalized_time(bad), Error);
}

TEST_CASE("bit string payload requires zero unused bits") {
    Bytes data = hex_decode("a1b2c3");
    TlvNode bs = bit_string(as_span(data));
    CHECK(read_bit_string(bs) == data);
    TlvNode bad = bs;
    bad.value[0] = 3;
    CHECK_THROWS_AS(read_bit_string(bad), Error);
}

TEST_CASE("round-trip identity both directions on a generated corpus") {
    DeterministicRandom rng(uint64_t{42});
    for (int i = 0; i < 500; ++i) {
        TlvNode node = random_node(rng, 0);
        Bytes encoded = encode(node);
        TlvNode decoded = decode(as_span(encoded));
        CHECK(decoded == node);
        CHECK(encode(decoded) == encoded);
        CHECK(encoded_length(node) == encoded.size());
    }
}

TEST_CASE("dump renders a readable tree") {
    TlvNode node = sequence({integer(int64_t{5}), utf8_string("Alice"),
                             object_id(Oid{{2, 5, 4, 3}})});
    std::string text = dump(node);
    CHECK(text.find("SEQUENCE") != std::string::npos);
    CHECK(text.find("Alice") != std::string::npos);
    CHECK(text.find("2.5.4.3") != std::string::npos);
}

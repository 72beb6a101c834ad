#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <mutex>
#include <thread>

#include "pqkex/errors.hpp"
#include "pqkex/keyfiles.hpp"
#include "pqkex/netdemo.hpp"
#include "support.hpp"

using namespace pqkex;
using namespace pqkex::net;
using namespace pqkex::test;

TEST_CASE("frame encode/decode and length prefix") {
    Frame frame{kFrameChat, to_bytes("payload")};
    Bytes wire = encode_frame(frame);
    REQUIRE(wire.size() == 4 + 1 + 7);
    CHECK(wire[3] == 8);  // big-endian length = 1 + 7
    CHECK(wire[0] + wire[1] + wire[2] == 0);
    Frame back = decode_frame(ByteSpan(wire.data() + 4, wire.size() - 4));
    CHECK(back.kind == frame.kind);
    CHECK(back.body == frame.body);

    Frame oversize{kFrameChat, Bytes(kMaxFrameBytes, 0)};
    CHECK_THROWS_AS(encode_frame(oversize), Error);
}

TEST_CASE("frame I/O over a socketpair, oversize rejected by the reader") {
    int fds[2];
    REQUIRE(socketpair(AF_UNIX, SOCK_STREAM, 0, fds) == 0);
    Frame frame{kFrameHandshake, to_bytes("abc")};
    Bytes transcript;
    write_frame(fds[0], frame, &transcript);
    Frame back = read_frame(fds[1], nullptr);
    CHECK(back.body == frame.body);
    CHECK(transcript.size() == 4 + 1 + 3);

    // A length prefix past the limit aborts before allocation.
    uint8_t evil[4] = {0xFF, 0xFF, 0xFF, 0xFF};
    REQUIRE(write(fds[0], evil, 4) == 4);
    CHECK_THROWS_AS(read_frame(fds[1], nullptr), Error);
    close(fds[0]);
    close(fds[1]);
}

TEST_CASE("chat envelope: round-trip, tamper, replay, reorder") {
    SessionKey key;
    for (size_t i = 0; i < 32; ++i) key.bytes[i] = static_cast<uint8_t>(i);

    uint64_t last_seen = 0;
    Bytes first = seal_chat(key, kDirInitiator, 1, "hello");
    CHECK(open_chat(key, kDirInitiator, last_seen, as_span(first)) == "hello");
    CHECK(last_seen == 1);

    // Replay of sequence 1 rejected.
    CHECK_THROWS_AS(open_chat(key, kDirInitiator, last_seen, as_span(first)), Error);

    // Out-of-order: 3 then 2.
    Bytes third = seal_chat(key, kDirInitiator, 3, "three");
    Bytes second = seal_chat(key, kDirInitiator, 2, "two");
    CHECK(open_chat(key, kDirInitiator, last_seen, as_span(third)) == "three");
    CHECK_THROWS_AS(open_chat(key, kDirInitiator, last_seen, as_span(second)), Error);

    // Tampered ciphertext rejected.
    Bytes fourth = seal_chat(key, kDirInitiator, 4, "four");
    fourth[12] ^= 0x01;
    CHECK_THROWS_AS(open_chat(key, kDirInitiator, last_seen, as_span(fourth)), Error);

    // Wrong direction (nonce mismatch) rejected.
    Bytes fifth = seal_chat(key, kDirInitiator, 5, "five");
    CHECK_THROWS_AS(open_chat(key, kDirResponder, last_seen, as_span(fifth)), Error);
}

TEST_CASE("serve/connect on loopback: fingerprints match, chat round-trips") {
    Suite suite = l1_mldsa();
    const auto& [alice, bob] = test_parties(suite, CertScheme::Composite);
    Bytes ca_public(test_ca_public(suite).begin(), test_ca_public(suite).end());

    std::vector<std::string> server_lines, client_lines;
    std::mutex lines_mutex;

    PeerConfig server;
    server.host = "127.0.0.1";
    server.port = 17881;
    server.credential = bob;
    server.ca_public = ca_public;
    server.once = true;
    server.echo = true;
    server.on_line = [&](const std::string& line) {
        std::lock_guard lock(lines_mutex);
        server_lines.push_back(line);
    };

    std::thread server_thread([&] { CHECK(serve(server) == 0); });

    PeerConfig client;
    client.host = "127.0.0.1";
    client.port = 17881;
    client.credential = alice;
    client.ca_public = ca_public;
    client.send_message = "hello";
    client.expect_messages = 1;
    client.on_line = [&](const std::string& line) {
        std::lock_guard lock(lines_mutex);
        client_lines.push_back(line);
    };

    // The server needs a moment to bind.
    int status = -1;
    for (int attempt = 0; attempt < 50; ++attempt) {
        try {
            status = connect_peer(client);
            break;
        } catch (const Error&) {
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
    }
    server_thread.join();
    REQUIRE(status == 0);

    REQUIRE(!server_lines.empty());
    REQUIRE(!client_lines.empty());
    // Both ends print the same 16-hex-char fingerprint.
    std::string server_fp = server_lines[0].substr(server_lines[0].rfind(' ') + 1);
    std::string client_fp = client_lines[0].substr(client_lines[0].rfind(' ') + 1);
    CHECK(server_fp.size() == 16);
    CHECK(server_fp == client_fp);
    // The echo came back decrypted.
    CHECK(client_lines[1] == "peer> hello");
    CHECK(server_lines[1] == "peer> hello");
}

TEST_CASE("expired certificate: responder drops, initiator fails") {
    Suite suite = l1_mldsa();
    const CaContext& ca = test_ca(suite);
    DeterministicRandom rng(uint64_t{600});
    CertTemplate expired = cert_template("Alice", 66);
    expired.not_before = 1000;
    expired.not_after = 2000;  // long past
    Credential alice = make_dual_credential(ca, CertScheme::Composite, expired, rng);
    const auto& [unused, bob] = test_parties(suite, CertScheme::Composite);
    Bytes ca_public(test_ca_public(suite).begin(), test_ca_public(suite).end());

    PeerConfig server;
    server.host = "127.0.0.1";
    server.port = 17882;
    server.credential = bob;
    server.ca_public = ca_public;
    server.once = true;
    server.on_line = [](const std::string&) {};

    std::thread server_thread([&] { CHECK(serve(server) == 1); });

    PeerConfig client;
    client.host = "127.0.0.1";
    client.port = 17882;
    client.credential = alice;
    client.ca_public = ca_public;
    client.send_message = "hi";
    client.on_line = [](const std::string&) {};

    int status = -1;
    for (int attempt = 0; attempt < 50; ++attempt) {
        try {
            status = connect_peer(client);
            break;
        } catch (const Error&) {
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
    }
    server_thread.join();
    CHECK(status == 1);  // responder dropped; initiator sees EOF
    (void)unused;
}

TEST_CASE("plaintext never appears in the transcript") {
    Suite suite = l1_mldsa();
    const auto& [alice, bob] = test_parties(suite, CertScheme::Catalyst);
    Bytes ca_public(test_ca_public(suite).begin(), test_ca_public(suite).end());
    std::string secret_text = "the secret plaintext sentinel";

    std::string transcript_path = "/tmp/pqkex_test_transcript.bin";

    PeerConfig server;
    server.host = "127.0.0.1";
    server.port = 17883;
    server.credential = bob;
    server.ca_public = ca_public;
    server.once = true;
    server.expect_messages = 1;
    server.on_line = [](const std::string&) {};

    std::thread server_thread([&] { serve(server); });

    PeerConfig client;
    client.host = "127.0.0.1";
    client.port = 17883;
    client.credential = alice;
    client.ca_public = ca_public;
    client.send_message = secret_text;
    client.transcript_path = transcript_path;
    client.on_line = [](const std::string&) {};

    int status = -1;
    for (int attempt = 0; attempt < 50; ++attempt) {
        try {
            status = connect_peer(client);
            break;
        } catch (const Error&) {
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
    }
    server_thread.join();
    REQUIRE(status == 0);

    Bytes transcript = read_file(transcript_path);
    CHECK(transcript.size() > 0);
    auto it = std::search(transcript.begin(), transcript.end(), secret_text.begin(),
                          secret_text.end());
    CHECK(it == transcript.end());
}

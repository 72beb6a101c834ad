#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <functional>
#include <thread>

#include "pqkex/der.hpp"
#include "pqkex/errors.hpp"
#include "pqkex/handshake.hpp"
#include "support.hpp"

using namespace pqkex;
using namespace pqkex::test;

namespace {

struct HonestRun {
    SignedData r1, r2, r3;
    SessionKey initiator_key, responder_key;
};

HonestRun honest_run(const Suite& suite, CertScheme scheme, RandomSource& rng,
                     SessionTable& table, int64_t t = kNow) {
    const auto& [alice, bob] = test_parties(suite, scheme);
    ByteSpan ca_public = test_ca_public(suite);
    HonestRun run;
    auto [session, r1] = initiator_start(alice, suite, t);
    run.r1 = r1;
    run.r2 = responder_on_request(decode_message(as_span(r1.encoded)), bob, table, ca_public, t,
                                  rng);
    auto [r3, key_a] = initiator_on_response(session, decode_message(as_span(run.r2.encoded)),
                                             ca_public, t, rng);
    run.r3 = r3;
    run.initiator_key = key_a;
    run.responder_key =
        responder_on_ack(decode_message(as_span(r3.encoded)), bob, table, t);
    return run;
}

Errc step_error(std::function<void()> step) {
    try {
        step();
        return Errc::BadValue;
    } catch (const Error& e) {
        return e.code();
    }
}

}  // namespace

TEST_CASE("derive_session_key XOR properties") {
    SharedSecret zero;
    SharedSecret x;
    for (size_t i = 0; i < 32; ++i) x.bytes[i] = static_cast<uint8_t>(i * 7 + 1);
    CHECK(derive_session_key(zero, x).bytes == x.bytes);
    CHECK(derive_session_key(x, x).bytes == zero.bytes);
    SharedSecret y;
    for (size_t i = 0; i < 32; ++i) y.bytes[i] = static_cast<uint8_t>(255 - i);
    CHECK(derive_session_key(x, y) == derive_session_key(y, x));
}

TEST_CASE("honest handshake completes with equal keys, all schemes") {
    DeterministicRandom rng(uint64_t{300});
    for (CertScheme scheme : {CertScheme::Composite, CertScheme::Catalyst,
                              CertScheme::Chameleon, CertScheme::PureDsa}) {
        SessionTable table;
        HonestRun run = honest_run(l1_mldsa(), scheme, rng, table);
        CHECK(run.initiator_key == run.responder_key);
        CHECK(table.size() == 0);  // consumed by the ack
    }
}

TEST_CASE("certificate counts per mode") {
    const auto& [alice_dual, bob_dual] = test_parties(l1_mldsa(), CertScheme::Composite);
    auto [s1, r1_dual] = initiator_start(alice_dual, l1_mldsa(), kNow);
    CHECK(r1_dual.certificates.size() == 1);
    (void)s1;
    (void)bob_dual;

    const auto& [alice_pure, bob_pure] = test_parties(l1_mldsa(), CertScheme::PureDsa);
    auto [s2, r1_pure] = initiator_start(alice_pure, l1_mldsa(), kNow);
    CHECK(r1_pure.certificates.size() == 2);
    CHECK(alice_pure.ack_certificates().size() == 1);
    (void)s2;
    (void)bob_pure;
}

TEST_CASE("credential/suite mismatch rejected") {
    const auto& [alice, bob] = test_parties(l1_mldsa(), CertScheme::Composite);
    CHECK(step_error([&] { initiator_start(alice, l3_mldsa(), kNow); }) ==
          Errc::CredentialMismatch);
    (void)bob;
}

TEST_CASE("request from a PureKem-only credential cannot authenticate") {
    Suite suite = l1_mldsa();
    const auto& [alice, bob] = test_parties(suite, CertScheme::PureDsa);
    // Hand-build a kepReq whose only certificate is the pure KEM one; the
    // signer serial matches no DSA-bearing certificate.
    DeterministicRandom rng(uint64_t{301});
    SessionTable table;
    ContentInfo content{MessageType::KepReq, {}, {}};
    // build() itself refuses a KEM-only signer certificate, so splice the
    // pure-KEM certificate into an otherwise valid request.
    auto [session, good] = initiator_start(alice, suite, kNow);
    (void)session;
    der::TlvNode root = der::decode(as_span(good.encoded));
    der::TlvNode kem_cert = der::decode(as_span(alice.certificates[1].encoded));
    root.children[2].children.clear();
    root.children[2].children.push_back(kem_cert);
    SignedData spliced = decode_message(as_span(der::encode(root)));
    CHECK(step_error([&] {
              responder_on_request(spliced, bob, table, test_ca_public(suite), kNow, rng);
          }) == Errc::CertInvalid);
    CHECK(table.size() == 0);
    (void)content;
}

TEST_CASE("tampered signature leaves the session table untouched") {
    Suite suite = l1_mldsa();
    const auto& [alice, bob] = test_parties(suite, CertScheme::Composite);
    DeterministicRandom rng(uint64_t{302});
    SessionTable table;
    auto [session, r1] = initiator_start(alice, suite, kNow);
    (void)session;
    Bytes tampered = flip_inside(r1.encoded, as_span(r1.signer.signature), 3);
    CHECK(step_error([&] {
              responder_on_request(decode_message(as_span(tampered)), bob, table,
                                   test_ca_public(suite), kNow, rng);
          }) == Errc::BadSignature);
    CHECK(table.size() == 0);
}

TEST_CASE("response binding: h_1 must match our request") {
    Suite suite = l1_mldsa();
    const auto& [alice, bob] = test_parties(suite, CertScheme::Composite);
    ByteSpan ca_public = test_ca_public(suite);
    DeterministicRandom rng(uint64_t{303});
    SessionTable table;

    // Two distinct sessions (distinct signing times make distinct requests).
    auto [session1, r1a] = initiator_start(alice, suite, kNow);
    auto [session2, r1b] = initiator_start(alice, suite, kNow + 1);
    CHECK(message_id(r1a) != message_id(r1b));
    SignedData r2_for_a = responder_on_request(r1a, bob, table, ca_public, kNow, rng);

    // Replay of session-1's response into session 2.
    CHECK(step_error([&] {
              initiator_on_response(session2, r2_for_a, ca_public, kNow, rng);
          }) == Errc::MismatchedRequestId);
    CHECK(session2.state == SessionState::Failed);

    // The right session still completes.
    auto [r3, key] = initiator_on_response(session1, r2_for_a, ca_public, kNow, rng);
    CHECK(session1.state == SessionState::Completed);
    SessionKey bob_key = responder_on_ack(r3, bob, table, kNow);
    CHECK(key == bob_key);

    // A completed session refuses further responses.
    CHECK(step_error([&] {
              initiator_on_response(session1, r2_for_a, ca_public, kNow, rng);
          }) == Errc::InvalidState);
}

TEST_CASE("ack replay and double redemption rejected via one-shot consumption") {
    Suite suite = l1_mldsa();
    const auto& [alice, bob] = test_parties(suite, CertScheme::Composite);
    DeterministicRandom rng(uint64_t{304});
    SessionTable table;
    HonestRun run = honest_run(suite, CertScheme::Composite, rng, table);
    CHECK(run.initiator_key == run.responder_key);
    CHECK(step_error([&] { responder_on_ack(run.r3, bob, table, kNow); }) ==
          Errc::UnknownResponseId);
    (void)alice;
}

TEST_CASE("ack for an unknown response id rejected") {
    Suite suite = l1_mldsa();
    const auto& [alice, bob] = test_parties(suite, CertScheme::Composite);
    DeterministicRandom rng(uint64_t{305});
    SessionTable table_a, table_b;
    HonestRun run = honest_run(suite, CertScheme::Composite, rng, table_a);
    // A table that never saw the response: lookup fails.
    CHECK(step_error([&] { responder_on_ack(run.r3, bob, table_b, kNow); }) ==
          Errc::UnknownResponseId);
    (void)alice;
}

TEST_CASE("third party cannot forge the ack for a stored session") {
    Suite suite = l1_mldsa();
    const auto& [alice, bob] = test_parties(suite, CertScheme::Composite);
    const auto& [mallory, unused] = test_parties(suite, CertScheme::Composite, 99);
    ByteSpan ca_public = test_ca_public(suite);
    DeterministicRandom rng(uint64_t{306});
    SessionTable table;

    auto [session, r1] = initiator_start(alice, suite, kNow);
    (void)session;
    SignedData r2 = responder_on_request(r1, bob, table, ca_public, kNow, rng);

    // Mallory holds a valid certificate from the same CA... but the stored
    // session pins Alice's DSA key, so the signature check fails.
    auto [ct, secret] = kem_encapsulate(suite.kem, as_span(bob.kem_keys.public_key), rng);
    (void)secret;
    ContentInfo forged{MessageType::KepAck, ct, message_id(r2)};
    SignedData forged_ack = build(MessageType::KepAck, forged, mallory.ack_certificates(),
                                  mallory.dsa_keys, kNow);
    CHECK(step_error([&] { responder_on_ack(forged_ack, bob, table, kNow); }) ==
          Errc::BadSignature);
    // Failed redemption does not consume the entry.
    CHECK(table.size() == 1);
    (void)unused;
}

TEST_CASE("session table expiry and capacity eviction") {
    SessionTable table(4, 600);
    auto make_session = [](uint8_t tag, int64_t at) {
        ResponderSession s;
        s.response_id = {tag, 0, 0, 0, 0, 0, 0, 0};
        s.created_at = at;
        return s;
    };
    table.insert(make_session(1, 1000), 1000);
    table.insert(make_session(2, 1100), 1100);
    CHECK(table.peek({1, 0, 0, 0, 0, 0, 0, 0}, 1500).has_value());
    // Expired entries vanish.
    CHECK_FALSE(table.peek({1, 0, 0, 0, 0, 0, 0, 0}, 1000 + 601).has_value());
    // Capacity eviction drops the oldest entries first.
    SessionTable bounded(2, 600);
    bounded.insert(make_session(1, 1000), 1000);
    bounded.insert(make_session(2, 1001), 1001);
    bounded.insert(make_session(3, 1002), 1002);
    CHECK(bounded.size() == 2);
    CHECK_FALSE(bounded.peek({1, 0, 0, 0, 0, 0, 0, 0}, 1003).has_value());
    CHECK(bounded.peek({3, 0, 0, 0, 0, 0, 0, 0}, 1003).has_value());
}

TEST_CASE("concurrent ack redemption: exactly one winner") {
    SessionTable table;
    ResponderSession s;
    s.response_id = {9, 9, 9, 9, 9, 9, 9, 9};
    s.created_at = kNow;
    table.insert(s, kNow);

    std::atomic<int> winners{0};
    std::vector<std::thread> threads;
    for (int i = 0; i < 8; ++i)
        threads.emplace_back([&] {
            if (table.consume({9, 9, 9, 9, 9, 9, 9, 9})) winners.fetch_add(1);
        });
    for (auto& t : threads) t.join();
    CHECK(winners.load() == 1);
}

TEST_CASE("fresh responder randomness makes fresh keys for identical requests") {
    // A transcript observer replaying the same R_1 cannot predict k: the
    // responder's encapsulation draws fresh randomness each time.
    Suite suite = l1_mldsa();
    const auto& [alice, bob] = test_parties(suite, CertScheme::Composite);
    ByteSpan ca_public = test_ca_public(suite);
    SessionTable table;
    auto [session1, r1] = initiator_start(alice, suite, kNow);
    auto [session2, r1_again] = initiator_start(alice, suite, kNow);
    CHECK(r1.encoded == r1_again.encoded);  // identical transcript-visible input

    DeterministicRandom rng_a(uint64_t{400}), rng_b(uint64_t{500});
    SignedData r2a = responder_on_request(r1, bob, table, ca_public, kNow, rng_a);
    SignedData r2b = responder_on_request(r1_again, bob, table, ca_public, kNow, rng_b);
    CHECK(r2a.content.payload->bytes != r2b.content.payload->bytes);

    auto [r3a, key_a] = initiator_on_response(session1, r2a, ca_public, kNow, rng_a);
    auto [r3b, key_b] = initiator_on_response(session2, r2b, ca_public, kNow, rng_b);
    CHECK_FALSE(key_a == key_b);
    (void)r3a;
    (void)r3b;
}

TEST_CASE("all nine suites complete at least once") {
    DeterministicRandom rng(uint64_t{307});
    for (DsaFamily family : kAllFamilies) {
        // Keep the slow SLH-DSA (small) runs to the cheapest level here; the
        // full 9x4 matrix runs in the acceptance suite.
        SecurityLevel level = family == DsaFamily::SlhDsaSmall ? SecurityLevel::L1
                                                               : SecurityLevel::L3;
        Suite suite = suite_for(level, family);
        SessionTable table;
        HonestRun run = honest_run(suite, CertScheme::Composite, rng, table);
        CHECK(run.initiator_key == run.responder_key);
    }
}

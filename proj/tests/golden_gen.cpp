// Regenerates the frozen vectors under tests/data/. The inputs are fully
// deterministic (fixed seeds, serials and timestamps), so reruns are
// byte-identical; the ids in golden_ids.hpp are pinned from an independent
// SHAKE-256 oracle over the emitted files.

#include <cstdio>
#include <string>

#include "pqkex/handshake.hpp"
#include "pqkex/keyfiles.hpp"
#include "support.hpp"

using namespace pqkex;
using namespace pqkex::test;

int main(int argc, char** argv) {
    std::string out_dir = argc > 1 ? argv[1] : "tests/data";

    Suite suite = l1_mldsa();
    DeterministicRandom rng(uint64_t{0xC0FFEE});
    CaContext ca = make_ca(suite, cert_template("PQC Root CA", 1), rng);
    Credential alice = make_dual_credential(ca, CertScheme::Composite,
                                            cert_template("Alice", 2), rng);
    Credential bob = make_dual_credential(ca, CertScheme::Composite,
                                          cert_template("Bob", 3), rng);

    auto [session, req] = initiator_start(alice, suite, kNow);
    SessionTable table;
    SignedData resp = responder_on_request(req, bob, table, as_span(ca.ca_keys.public_key),
                                           kNow, rng);
    (void)session;

    write_file(out_dir + "/golden_ca.der", as_span(ca.ca_certificate.encoded));
    write_file(out_dir + "/kepreq_golden.der", as_span(req.encoded));
    write_file(out_dir + "/kepresp_golden.der", as_span(resp.encoded));

    auto req_id = message_id(req);
    auto resp_id = message_id(resp);
    std::printf("req  %zu bytes id %s\n", req.encoded.size(),
                hex_encode(ByteSpan(req_id.data(), 8)).c_str());
    std::printf("resp %zu bytes id %s\n", resp.encoded.size(),
                hex_encode(ByteSpan(resp_id.data(), 8)).c_str());
    return 0;
}

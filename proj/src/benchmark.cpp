#include "pqkex/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "pqkex/errors.hpp"
#include "pqkex/handshake.hpp"
#include "pqkex/rng.hpp"

namespace pqkex::bench {

namespace {

Bytes bench_serial(RandomSource& rng) {
    Bytes serial = rng.bytes(8);  // fixed-width serials keep lengths deterministic
    serial[0] = 0x40 | (serial[0] & 0x3F);
    return serial;
}

uint64_t row_seed(const BenchConfig& config, const Suite& suite, Method method) {
    return config.seed * 1000003u + suite_index(suite) * 101u + static_cast<uint64_t>(method);
}

struct Parties {
    CaContext ca;
    Credential alice;
    Credential bob;
};

Parties set_up_parties(const Suite& suite, Method method, const BenchConfig& config,
                       RandomSource& rng) {
    CertTemplate ca_tmpl{config.issuer_cn, config.issuer_cn, bench_serial(rng),
                         config.not_before, config.not_after};
    Parties parties{make_ca(suite, ca_tmpl, rng), {}, {}};

    CertTemplate alice_tmpl{config.initiator_cn, config.issuer_cn, bench_serial(rng),
                            config.not_before, config.not_after};
    CertTemplate bob_tmpl{config.responder_cn, config.issuer_cn, bench_serial(rng),
                          config.not_before, config.not_after};
    if (method == Method::Compared) {
        parties.alice = make_pure_credential(parties.ca, alice_tmpl, rng);
        parties.bob = make_pure_credential(parties.ca, bob_tmpl, rng);
    } else {
        CertScheme scheme = method == Method::Composite ? CertScheme::Composite
                            : method == Method::Catalyst ? CertScheme::Catalyst
                                                         : CertScheme::Chameleon;
        parties.alice = make_dual_credential(parties.ca, scheme, alice_tmpl, rng);
        parties.bob = make_dual_credential(parties.ca, scheme, bob_tmpl, rng);
    }
    if (config.include_ca_cert) {
        parties.alice.ca_certificate_in_messages = parties.ca.ca_certificate;
        parties.bob.ca_certificate_in_messages = parties.ca.ca_certificate;
    }
    return parties;
}

LengthRow run_handshake_row(const Suite& suite, Method method, const BenchConfig& config,
                            const Parties& parties, RandomSource& rng) {
    const int64_t t = config.handshake_time;
    ByteSpan ca_public = as_span(parties.ca.ca_keys.public_key);
    SessionTable table;

    uint64_t v0 = signature_verify_count();
    auto [session, r1] = initiator_start(parties.alice, suite, t);
    SignedData r1_rx = decode_message(as_span(r1.encoded));

    uint64_t v1 = signature_verify_count();
    SignedData r2 = responder_on_request(r1_rx, parties.bob, table, ca_public, t, rng);
    SignedData r2_rx = decode_message(as_span(r2.encoded));

    uint64_t v2 = signature_verify_count();
    auto [r3, alice_key] = initiator_on_response(session, r2_rx, ca_public, t, rng);
    SignedData r3_rx = decode_message(as_span(r3.encoded));

    uint64_t v3 = signature_verify_count();
    SessionKey bob_key = responder_on_ack(r3_rx, parties.bob, table, t);
    uint64_t v4 = signature_verify_count();

    if (!(alice_key == bob_key)) fail(Errc::BadValue, "handshake keys disagree");
    (void)v0;

    LengthRow row;
    row.suite = suite;
    row.method = method;
    row.req_len = r1.encoded.size();
    row.resp_len = r2.encoded.size();
    row.ack_len = r3.encoded.size();
    row.verifications = {v2 - v1, v3 - v2, v4 - v3};
    return row;
}

double median_ms(std::vector<double>& samples) {
    size_t mid = samples.size() / 2;
    std::nth_element(samples.begin(), samples.begin() + static_cast<ptrdiff_t>(mid),
                     samples.end());
    if (samples.size() % 2 == 1) return samples[mid];
    double upper = samples[mid];
    std::nth_element(samples.begin(), samples.begin() + static_cast<ptrdiff_t>(mid) - 1,
                     samples.end());
    return (samples[mid - 1] + upper) / 2.0;
}

std::string family_title(DsaFamily family) {
    switch (family) {
        case DsaFamily::MlDsa: return "ML-DSA";
        case DsaFamily::SlhDsaSmall: return "SLH-DSA (small)";
        case DsaFamily::SlhDsaFast: return "SLH-DSA (fast)";
    }
    return "?";
}

std::string method_title(Method method) {
    switch (method) {
        case Method::Composite: return "The Proposed Method with Composite Scheme";
        case Method::Catalyst: return "The Proposed Method with Catalyst Scheme";
        case Method::Chameleon: return "The Proposed Method with Chameleon Scheme";
        case Method::Compared: return "The Compared Method";
    }
    return "?";
}

}  // namespace

const char* method_name(Method method) {
    switch (method) {
        case Method::Composite: return "composite";
        case Method::Catalyst: return "catalyst";
        case Method::Chameleon: return "chameleon";
        case Method::Compared: return "compared";
    }
    return "?";
}

LengthRow measure_lengths(const Suite& suite, Method method, const BenchConfig& config) {
    DeterministicRandom rng(row_seed(config, suite, method));
    Parties parties = set_up_parties(suite, method, config, rng);
    return run_handshake_row(suite, method, config, parties, rng);
}

const LengthRow& FamilyTables::row(SecurityLevel level, Method method) const {
    for (const LengthRow& r : rows)
        if (r.suite.level == level && r.method == method) return r;
    fail(Errc::BadValue, "missing table row");
}

FamilyTables run_family_tables(DsaFamily family, const BenchConfig& config) {
    FamilyTables tables;
    tables.family = family;
    for (SecurityLevel level : kAllLevels) {
        Suite suite = suite_for(level, family);
        for (Method method : kAllMethods)
            tables.rows.push_back(measure_lengths(suite, method, config));
    }
    return tables;
}

TimingRow measure_timings(const Suite& suite, Method method, size_t iterations,
                          const BenchConfig& config) {
    if (iterations < 30) fail(Errc::BadValue, "timing requires at least 30 iterations");

    DeterministicRandom rng(row_seed(config, suite, method) ^ 0x74696d65u);  // "time"
    Parties parties = set_up_parties(suite, method, config, rng);
    const int64_t t = config.handshake_time;
    ByteSpan ca_public = as_span(parties.ca.ca_keys.public_key);

    using Clock = std::chrono::steady_clock;
    auto ms_since = [](Clock::time_point start) {
        return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    };

    std::vector<double> build_req, verify_req, build_resp, verify_resp, build_ack, verify_ack;
    TimingRow row;
    row.suite = suite;
    row.method = method;
    row.iterations = iterations;

    // Message-level steps mirroring the protocol: build steps include the
    // KEM work that produces the payload, verify steps the receiver's full
    // processing (certificates, digest, signature, binding, decapsulation).
    for (size_t iter = 0; iter < iterations + 1; ++iter) {  // first pass is warm-up
        auto t0 = Clock::now();
        SignedData r1 = pqkex::build(MessageType::KepReq, ContentInfo{},
                                     parties.alice.request_certificates(),
                                     parties.alice.dsa_keys, t);
        double d_build_req = ms_since(t0);
        SignedData r1_rx = decode_message(as_span(r1.encoded));

        uint64_t v1 = signature_verify_count();
        t0 = Clock::now();
        VerifyResult vr1 = pqkex::verify(r1_rx, ca_public, t);
        double d_verify_req = ms_since(t0);
        uint64_t v2 = signature_verify_count();

        t0 = Clock::now();
        auto [ct_b, r_b] =
            kem_encapsulate(*vr1.keys.kem_algorithm, as_span(*vr1.keys.kem_public), rng);
        ContentInfo resp_content{MessageType::KepResp, ct_b, message_id(r1_rx)};
        SignedData r2 = pqkex::build(MessageType::KepResp, resp_content,
                                     parties.bob.request_certificates(), parties.bob.dsa_keys, t);
        double d_build_resp = ms_since(t0);
        SignedData r2_rx = decode_message(as_span(r2.encoded));

        t0 = Clock::now();
        VerifyResult vr2 = pqkex::verify(r2_rx, ca_public, t);
        if (*r2_rx.content.peer_message_id != message_id(r1))
            fail(Errc::MismatchedRequestId, "timing handshake corrupted");
        SharedSecret r_b_alice = kem_decapsulate(parties.alice.kem_keys, *r2_rx.content.payload);
        double d_verify_resp = ms_since(t0);
        uint64_t v3 = signature_verify_count();

        t0 = Clock::now();
        auto [ct_a, r_a] =
            kem_encapsulate(*vr2.keys.kem_algorithm, as_span(*vr2.keys.kem_public), rng);
        ContentInfo ack_content{MessageType::KepAck, ct_a, message_id(r2_rx)};
        SignedData r3 = pqkex::build(MessageType::KepAck, ack_content,
                                     parties.alice.ack_certificates(), parties.alice.dsa_keys, t);
        double d_build_ack = ms_since(t0);
        SignedData r3_rx = decode_message(as_span(r3.encoded));

        t0 = Clock::now();
        verify_with_key(r3_rx, *vr1.keys.dsa_algorithm, as_span(vr1.keys.dsa_public), t);
        SharedSecret r_a_bob = kem_decapsulate(parties.bob.kem_keys, *r3_rx.content.payload);
        SessionKey bob_key = derive_session_key(r_a_bob, r_b);
        double d_verify_ack = ms_since(t0);
        uint64_t v4 = signature_verify_count();

        SessionKey alice_key = derive_session_key(r_a, r_b_alice);
        if (!(alice_key == bob_key)) fail(Errc::BadValue, "handshake keys disagree");
        if (iter == 0) {
            row.verifications = {v2 - v1, v3 - v2, v4 - v3};
            continue;
        }

        build_req.push_back(d_build_req);
        verify_req.push_back(d_verify_req);
        build_resp.push_back(d_build_resp);
        verify_resp.push_back(d_verify_resp);
        build_ack.push_back(d_build_ack);
        verify_ack.push_back(d_verify_ack);
    }

    row.build_req_ms = median_ms(build_req);
    row.verify_req_ms = median_ms(verify_req);
    row.build_resp_ms = median_ms(build_resp);
    row.verify_resp_ms = median_ms(verify_resp);
    row.build_ack_ms = median_ms(build_ack);
    row.verify_ack_ms = median_ms(verify_ack);
    return row;
}

std::string emit_report(std::span<const LengthRow> rows, ReportFormat format) {
    std::string out;
    if (format == ReportFormat::Csv) {
        out += "family,method,level,req_len,resp_len,ack_len,total\n";
        for (const LengthRow& r : rows) {
            char line[160];
            std::snprintf(line, sizeof line, "%s,%s,%s,%zu,%zu,%zu,%zu\n",
                          family_name(family_of(r.suite.dsa)), method_name(r.method),
                          level_name(r.suite.level), r.req_len, r.resp_len, r.ack_len,
                          r.total());
            out += line;
        }
        return out;
    }

    // Markdown: one table per message type per family, methods as rows.
    struct Section {
        const char* title;
        size_t LengthRow::*field;
    };
    static constexpr Section kSections[] = {
        {"Key Exchange Request", &LengthRow::req_len},
        {"Key Exchange Response", &LengthRow::resp_len},
        {"Key Exchange Ack", &LengthRow::ack_len},
    };

    std::vector<DsaFamily> families;
    for (const LengthRow& r : rows) {
        DsaFamily f = family_of(r.suite.dsa);
        if (std::find(families.begin(), families.end(), f) == families.end())
            families.push_back(f);
    }
    if (families.empty()) {
        out += "| Method | Security Level 1 | Security Level 3 | Security Level 5 |\n";
        out += "|---|---|---|---|\n";
        return out;
    }

    auto find_row = [&rows](DsaFamily family, Method method,
                            SecurityLevel level) -> const LengthRow* {
        for (const LengthRow& r : rows)
            if (family_of(r.suite.dsa) == family && r.method == method &&
                r.suite.level == level)
                return &r;
        return nullptr;
    };

    for (DsaFamily family : families) {
        for (const Section& section : kSections) {
            out += "## The Length Comparison of " + std::string(section.title) + " Based on " +
                   family_title(family) + " (Unit: Bytes)\n\n";
            out += "| Method | Security Level 1 | Security Level 3 | Security Level 5 |\n";
            out += "|---|---|---|---|\n";
            for (Method method : kAllMethods) {
                out += "| " + method_title(method);
                for (SecurityLevel level : kAllLevels) {
                    const LengthRow* r = find_row(family, method, level);
                    out += " | ";
                    out += r ? std::to_string(r->*(section.field)) : "-";
                }
                out += " |\n";
            }
            out += "\n";
        }
        out += "## Handshake Total Based on " + family_title(family) + " (Unit: Bytes)\n\n";
        out += "| Method | Security Level 1 | Security Level 3 | Security Level 5 |\n";
        out += "|---|---|---|---|\n";
        for (Method method : kAllMethods) {
            out += "| " + method_title(method);
            for (SecurityLevel level : kAllLevels) {
                const LengthRow* r = find_row(family, method, level);
                out += " | ";
                out += r ? std::to_string(r->total()) : "-";
            }
            out += " |\n";
        }
        out += "\n";
    }
    return out;
}

std::string emit_timing_report(std::span<const TimingRow> rows, ReportFormat format) {
    std::string out;
    if (format == ReportFormat::Csv) {
        out += "family,method,level,iterations,build_req_ms,verify_req_ms,build_resp_ms,"
               "verify_resp_ms,build_ack_ms,verify_ack_ms,verifs_req,verifs_resp,verifs_ack\n";
        for (const TimingRow& r : rows) {
            char line[320];
            std::snprintf(line, sizeof line,
                          "%s,%s,%s,%zu,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f,%llu,%llu,%llu\n",
                          family_name(family_of(r.suite.dsa)), method_name(r.method),
                          level_name(r.suite.level), r.iterations, r.build_req_ms,
                          r.verify_req_ms, r.build_resp_ms, r.verify_resp_ms, r.build_ack_ms,
                          r.verify_ack_ms,
                          static_cast<unsigned long long>(r.verifications.req),
                          static_cast<unsigned long long>(r.verifications.resp),
                          static_cast<unsigned long long>(r.verifications.ack));
            out += line;
        }
        return out;
    }

    out += "| Suite | Method | N | build req | verify req | build resp | verify resp | build "
           "ack | verify ack | sig checks (req/resp/ack) |\n";
    out += "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const TimingRow& r : rows) {
        char line[512];
        std::snprintf(line, sizeof line,
                      "| %s | %s | %zu | %.2f ms | %.2f ms | %.2f ms | %.2f ms | %.2f ms | "
                      "%.2f ms | %llu/%llu/%llu |\n",
                      suite_name(r.suite).c_str(), method_name(r.method), r.iterations,
                      r.build_req_ms, r.verify_req_ms, r.build_resp_ms, r.verify_resp_ms,
                      r.build_ack_ms, r.verify_ack_ms,
                      static_cast<unsigned long long>(r.verifications.req),
                      static_cast<unsigned long long>(r.verifications.resp),
                      static_cast<unsigned long long>(r.verifications.ack));
        out += line;
    }
    return out;
}

std::vector<std::string> check_table_invariants(const FamilyTables& tables) {
    std::vector<std::string> violations;
    auto note = [&violations](const std::string& text) { violations.push_back(text); };

    // resp - req - ciphertext: constant per method across suites. Methods
    // differ from each other only by the subject-name asymmetry (the
    // response repeats the sender swap once per carried certificate).
    std::array<std::optional<long>, 4> method_k;
    std::optional<long> catalyst_gap;

    for (SecurityLevel level : kAllLevels) {
        const LengthRow& composite = tables.row(level, Method::Composite);
        const LengthRow& catalyst = tables.row(level, Method::Catalyst);
        const LengthRow& chameleon = tables.row(level, Method::Chameleon);
        const LengthRow& compared = tables.row(level, Method::Compared);
        const char* lvl = level_name(level);

        // Request/response ordering.
        if (!(composite.req_len < catalyst.req_len && catalyst.req_len < chameleon.req_len &&
              chameleon.req_len < compared.req_len))
            note(std::string("request ordering violated at ") + lvl);
        if (!(composite.resp_len < catalyst.resp_len && catalyst.resp_len < chameleon.resp_len &&
              chameleon.resp_len < compared.resp_len))
            note(std::string("response ordering violated at ") + lvl);
        // Compared ack is the shortest ack.
        for (Method m : {Method::Composite, Method::Catalyst, Method::Chameleon})
            if (compared.ack_len >= tables.row(level, m).ack_len)
                note(std::string("compared ack not shortest at ") + lvl);
        // Totals.
        if (!(composite.total() < compared.total()))
            note(std::string("composite total not below compared at ") + lvl);
        if (!(catalyst.total() < compared.total()))
            note(std::string("catalyst total not below compared at ") + lvl);

        // resp - req = ciphertext + k with one k per method across levels.
        size_t ct = params(composite.suite.kem).ciphertext_bytes;
        for (Method m : kAllMethods) {
            const LengthRow& row = tables.row(level, m);
            long k = static_cast<long>(row.resp_len) - static_cast<long>(row.req_len) -
                     static_cast<long>(ct);
            auto& expected = method_k[static_cast<size_t>(m)];
            if (!expected) expected = k;
            if (*expected != k)
                note(std::string("resp-req constant differs at ") + lvl + " " + method_name(m));
            if (k < -32 || k > 32)
                note(std::string("resp-req constant out of tolerance at ") + lvl);
        }

        // ack - resp = subject name length difference (2 with Alice/Bob).
        for (Method m : {Method::Composite, Method::Catalyst, Method::Chameleon}) {
            const LengthRow& row = tables.row(level, m);
            if (static_cast<long>(row.ack_len) - static_cast<long>(row.resp_len) != 2)
                note(std::string("dual-usage ack-resp != 2 at ") + lvl + " " + method_name(m));
        }

        long gap = static_cast<long>(catalyst.req_len) - static_cast<long>(composite.req_len);
        if (!catalyst_gap) catalyst_gap = gap;
        if (*catalyst_gap != gap) note(std::string("catalyst-composite gap varies at ") + lvl);
        if (gap <= 0 || gap > 64)
            note(std::string("catalyst-composite gap out of range at ") + lvl);
    }
    return violations;
}

}  // namespace pqkex::bench

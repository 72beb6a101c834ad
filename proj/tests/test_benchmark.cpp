#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "pqkex/benchmark.hpp"
#include "pqkex/errors.hpp"
#include "support.hpp"

using namespace pqkex;
using namespace pqkex::bench;

namespace {

// Minimal CSV parse for the round-trip check.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

TEST_CASE("rows are deterministic across runs") {
    BenchConfig config;
    Suite suite = test::l1_mldsa();
    LengthRow a = measure_lengths(suite, Method::Composite, config);
    LengthRow b = measure_lengths(suite, Method::Composite, config);
    CHECK(a.req_len == b.req_len);
    CHECK(a.resp_len == b.resp_len);
    CHECK(a.ack_len == b.ack_len);
    CHECK(a.verifications.req == b.verifications.req);
}

TEST_CASE("lengths come from verifying handshakes with the expected counts") {
    BenchConfig config;
    Suite suite = test::l1_mldsa();
    LengthRow composite = measure_lengths(suite, Method::Composite, config);
    LengthRow compared = measure_lengths(suite, Method::Compared, config);
    LengthRow chameleon = measure_lengths(suite, Method::Chameleon, config);

    // One more certificate to check per req/resp in compared mode.
    CHECK(compared.verifications.req == composite.verifications.req + 1);
    CHECK(compared.verifications.resp == composite.verifications.resp + 1);
    CHECK(compared.verifications.ack == composite.verifications.ack);
    // Chameleon request processing: outer cert + delta cert + message.
    CHECK(chameleon.verifications.req == 3);
    CHECK(composite.verifications.req == 2);
    CHECK(composite.verifications.ack == 1);

    CHECK(composite.total() == composite.req_len + composite.resp_len + composite.ack_len);
}

TEST_CASE("family tables hold the cross-table invariants") {
    BenchConfig config;
    FamilyTables tables = run_family_tables(DsaFamily::MlDsa, config);
    CHECK(tables.rows.size() == 12);
    std::vector<std::string> violations = check_table_invariants(tables);
    for (const std::string& v : violations) MESSAGE(v);
    CHECK(violations.empty());
}

TEST_CASE("include-ca-cert grows every message") {
    BenchConfig config;
    Suite suite = test::l1_mldsa();
    LengthRow without = measure_lengths(suite, Method::Composite, config);
    config.include_ca_cert = true;
    LengthRow with = measure_lengths(suite, Method::Composite, config);
    CHECK(with.req_len > without.req_len);
    CHECK(with.resp_len > without.resp_len);
    CHECK(with.ack_len > without.ack_len);
    // The growth is the CA certificate plus nothing else surprising: equal
    // for req and resp.
    CHECK(with.req_len - without.req_len == with.resp_len - without.resp_len);
}

TEST_CASE("csv report round-trips through parse-and-reemit") {
    BenchConfig config;
    std::vector<LengthRow> rows;
    rows.push_back(measure_lengths(test::l1_mldsa(), Method::Composite, config));
    rows.push_back(measure_lengths(test::l1_mldsa(), Method::Compared, config));
    std::string csv = emit_report(rows, ReportFormat::Csv);

    auto parsed = parse_csv(csv);
    REQUIRE(parsed.size() == 3);  // header + 2 rows
    CHECK(parsed[0][0] == "family");
    CHECK(parsed[1][1] == "composite");
    CHECK(std::stoul(parsed[1][3]) == rows[0].req_len);

    // Re-emit from the parsed numbers: byte-identical.
    std::vector<LengthRow> reparsed_rows = rows;
    reparsed_rows[0].req_len = std::stoul(parsed[1][3]);
    reparsed_rows[0].resp_len = std::stoul(parsed[1][4]);
    reparsed_rows[0].ack_len = std::stoul(parsed[1][5]);
    CHECK(emit_report(reparsed_rows, ReportFormat::Csv) == csv);
}

TEST_CASE("empty row set emits header-only output") {
    std::vector<LengthRow> empty;
    std::string csv = emit_report(empty, ReportFormat::Csv);
    CHECK(csv == "family,method,level,req_len,resp_len,ack_len,total\n");
    std::string md = emit_report(empty, ReportFormat::Markdown);
    CHECK(md.find("| Method |") != std::string::npos);
    CHECK(parse_csv(csv).size() == 1);
}

TEST_CASE("markdown table replicates the paper's shape") {
    BenchConfig config;
    FamilyTables tables = run_family_tables(DsaFamily::MlDsa, config);
    std::string md = emit_report(tables.rows, ReportFormat::Markdown);
    // Four method rows per table, three level columns.
    CHECK(md.find("The Proposed Method with Composite Scheme") != std::string::npos);
    CHECK(md.find("The Compared Method") != std::string::npos);
    CHECK(md.find("Key Exchange Request") != std::string::npos);
    CHECK(md.find("Security Level 5") != std::string::npos);
    // Identical rows, identical output.
    CHECK(emit_report(tables.rows, ReportFormat::Markdown) == md);
}

TEST_CASE("timing rows: medians positive, counter economy, N enforced") {
    BenchConfig config;
    Suite suite = test::l1_mldsa();
    CHECK_THROWS_AS(measure_timings(suite, Method::Composite, 29, config), Error);

    TimingRow composite = measure_timings(suite, Method::Composite, 30, config);
    TimingRow compared = measure_timings(suite, Method::Compared, 30, config);
    CHECK(composite.iterations == 30);
    for (double ms : {composite.build_req_ms, composite.verify_req_ms, composite.build_resp_ms,
                      composite.verify_resp_ms, composite.build_ack_ms, composite.verify_ack_ms})
        CHECK(ms > 0.0);
    CHECK(compared.verifications.req == composite.verifications.req + 1);
    CHECK(compared.verifications.resp == composite.verifications.resp + 1);

    std::vector<TimingRow> rows = {composite, compared};
    std::string csv = emit_timing_report(rows, ReportFormat::Csv);
    CHECK(csv.find("build_req_ms") != std::string::npos);
    std::string md = emit_timing_report(rows, ReportFormat::Markdown);
    CHECK(md.find("sig checks") != std::string::npos);
}

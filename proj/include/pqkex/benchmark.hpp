#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pqkex/certificates.hpp"
#include "pqkex/suite.hpp"

namespace pqkex::bench {

/// Row label: the three dual-usage schemes plus the pure-certificate
/// compared method.
enum class Method { Composite, Catalyst, Chameleon, Compared };

const char* method_name(Method method);

inline constexpr std::array<Method, 4> kAllMethods = {Method::Composite, Method::Catalyst,
                                                      Method::Chameleon, Method::Compared};

struct BenchConfig {
    std::string initiator_cn = "Alice";
    std::string responder_cn = "Bob";
    std::string issuer_cn = "PQC Root CA";
    int64_t not_before = 1735689600;   // 2025-01-01T00:00:00Z
    int64_t not_after = 2051222400;    // 2035-01-01T00:00:00Z
    int64_t handshake_time = 1748736000;  // 2025-06-01T00:00:00Z
    bool include_ca_cert = false;
    uint64_t seed = 1;
};

struct StepVerifications {
    uint64_t req = 0;
    uint64_t resp = 0;
    uint64_t ack = 0;
};

struct LengthRow {
    Suite suite;
    Method method = Method::Composite;
    size_t req_len = 0;
    size_t resp_len = 0;
    size_t ack_len = 0;
    StepVerifications verifications;  // signature checks done by the receiving side

    size_t total() const { return req_len + resp_len + ack_len; }
};

/// One honest handshake end to end; lengths are the actual wire bytes of
/// the three verifying messages, and both parties must land on the same key.
LengthRow measure_lengths(const Suite& suite, Method method, const BenchConfig& config);

struct FamilyTables {
    DsaFamily family = DsaFamily::MlDsa;
    std::vector<LengthRow> rows;  // 3 levels x 4 methods, level-major

    const LengthRow& row(SecurityLevel level, Method method) const;
};

FamilyTables run_family_tables(DsaFamily family, const BenchConfig& config);

struct TimingRow {
    Suite suite;
    Method method = Method::Composite;
    size_t iterations = 0;  // N >= 30
    // Median wall-clock milliseconds per step. Build steps include the KEM
    // work needed to produce the message; verify steps are the receiving
    // side's full processing of it.
    double build_req_ms = 0, verify_req_ms = 0;
    double build_resp_ms = 0, verify_resp_ms = 0;
    double build_ack_ms = 0, verify_ack_ms = 0;
    StepVerifications verifications;
};

TimingRow measure_timings(const Suite& suite, Method method, size_t iterations,
                          const BenchConfig& config);

enum class ReportFormat { Csv, Markdown };

/// Per-message tables in the paper's shape: method rows, level columns.
std::string emit_report(std::span<const LengthRow> rows, ReportFormat format);
std::string emit_timing_report(std::span<const TimingRow> rows, ReportFormat format);

/// The deltas and orderings the tables must satisfy; returns human-readable
/// violation descriptions (empty = all hold).
std::vector<std::string> check_table_invariants(const FamilyTables& tables);

}  // namespace pqkex::bench

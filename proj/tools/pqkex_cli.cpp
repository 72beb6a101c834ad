// pqkex command-line front end: key generation, certificate issuance and
// inspection, DER dumping, the length/timing benchmark, and the two ends of
// the instant-messaging demo.

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pqkex/benchmark.hpp"
#include "pqkex/der.hpp"
#include "pqkex/errors.hpp"
#include "pqkex/handshake.hpp"
#include "pqkex/keyfiles.hpp"
#include "pqkex/netdemo.hpp"

using json = nlohmann::json;
using namespace pqkex;

namespace {

int64_t parse_time(const std::string& text) {
    if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos)
        return std::stoll(text);
    struct tm tm_utc{};
    if (strptime(text.c_str(), "%Y-%m-%dT%H:%M:%SZ", &tm_utc) == nullptr)
        fail(Errc::BadValue, "time must be unix seconds or YYYY-MM-DDTHH:MM:SSZ");
    return static_cast<int64_t>(timegm(&tm_utc));
}

Bytes parse_serial(const std::string& hex, RandomSource& rng) {
    if (hex.empty()) {
        Bytes serial = rng.bytes(8);
        serial[0] = 0x40 | (serial[0] & 0x3F);
        return serial;
    }
    Bytes serial = hex_decode(hex);
    if (serial.empty() || serial.size() > 20) fail(Errc::BadValue, "serial must be 1..20 bytes");
    return serial;
}

Suite require_suite(const std::string& name) {
    auto suite = parse_suite(name);
    if (!suite)
        fail(Errc::BadValue,
             "unknown suite '" + name + "' (expected e.g. l1-mldsa, l3-slhdsa-s, l5-slhdsa-f)");
    return *suite;
}

Bytes read_input_auto(const std::string& path) {
    Bytes raw = read_file(path);
    std::string text(raw.begin(), raw.end());
    if (text.find("-----BEGIN") != std::string::npos) {
        size_t start = text.find("-----\n");
        size_t end = text.find("\n-----END");
        if (start != std::string::npos && end != std::string::npos && end > start)
            return base64_decode(text.substr(start + 6, end - start - 6));
    }
    return raw;
}

std::string cert_summary_text(const Certificate& cert) {
    std::string out;
    out += "scheme:        " + std::string(scheme_name(cert.scheme)) + "\n";
    out += "serial:        " + hex_encode(as_span(cert.serial)) + "\n";
    out += "subject CN:    " + cert.subject_common_name + "\n";
    out += "issuer CN:     " + cert.issuer_common_name + "\n";
    out += "not before:    " + std::to_string(cert.not_before) + "\n";
    out += "not after:     " + std::to_string(cert.not_after) + "\n";
    out += "signature alg: " + std::string(params(cert.ca_algorithm).name) + "\n";
    if (cert.dsa_algorithm)
        out += "dsa key:       " + std::string(params(*cert.dsa_algorithm).name) + ", " +
               std::to_string(cert.dsa_public.size()) + " bytes\n";
    if (cert.kem_algorithm)
        out += "kem key:       " + std::string(params(*cert.kem_algorithm).name) + ", " +
               std::to_string(cert.kem_public.size()) + " bytes\n";
    out += "encoded:       " + std::to_string(cert.encoded.size()) + " bytes\n";
    return out;
}

json cert_summary_json(const Certificate& cert) {
    json j;
    j["scheme"] = scheme_name(cert.scheme);
    j["serial"] = hex_encode(as_span(cert.serial));
    j["subject_cn"] = cert.subject_common_name;
    j["issuer_cn"] = cert.issuer_common_name;
    j["not_before"] = cert.not_before;
    j["not_after"] = cert.not_after;
    j["signature_algorithm"] = params(cert.ca_algorithm).name;
    if (cert.dsa_algorithm) j["dsa_algorithm"] = params(*cert.dsa_algorithm).name;
    if (cert.kem_algorithm) j["kem_algorithm"] = params(*cert.kem_algorithm).name;
    j["encoded_length"] = cert.encoded.size();
    return j;
}

struct CredentialArgs {
    std::string suite_name;
    std::string scheme_name_;
    std::string dsa_key_path;
    std::string kem_key_path;
    std::string cert_path;
    std::string cert2_path;
    std::string ca_cert_path;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--suite", suite_name, "cipher suite, e.g. l3-mldsa")->required();
        cmd->add_option("--scheme", scheme_name_, "composite | catalyst | chameleon | pure")
            ->required();
        cmd->add_option("--dsa-key", dsa_key_path, "DSA key pair file")->required();
        cmd->add_option("--kem-key", kem_key_path, "KEM key pair file")->required();
        cmd->add_option("--cert", cert_path, "certificate (dual-usage, or pure DSA)")
            ->required();
        cmd->add_option("--cert2", cert2_path, "pure KEM certificate (pure mode)");
        cmd->add_option("--ca-cert", ca_cert_path, "CA certificate")->required();
    }

    std::pair<Credential, Bytes> load() const {
        Suite suite = require_suite(suite_name);
        Credential cred;
        cred.suite = suite;
        cred.dsa_keys = load_dsa_keypair(dsa_key_path);
        cred.kem_keys = load_kem_keypair(kem_key_path);
        if (scheme_name_ == "pure") {
            if (cert2_path.empty())
                fail(Errc::BadValue, "pure mode needs --cert (DSA) and --cert2 (KEM)");
            cred.mode = CredentialMode::Pure;
            cred.scheme = CertScheme::PureDsa;
            cred.certificates.push_back(from_pem_or_der(cert_path));
            cred.certificates.push_back(from_pem_or_der(cert2_path));
        } else {
            auto scheme = parse_scheme(scheme_name_);
            if (!scheme || *scheme == CertScheme::PureDsa || *scheme == CertScheme::PureKem)
                fail(Errc::BadValue, "scheme must be composite, catalyst, chameleon or pure");
            cred.mode = CredentialMode::DualUsage;
            cred.scheme = *scheme;
            cred.certificates.push_back(from_pem_or_der(cert_path));
        }
        cred.check();

        Certificate ca_cert = from_pem_or_der(ca_cert_path);
        if (!ca_cert.dsa_algorithm) fail(Errc::BadValue, "CA certificate carries no DSA key");
        // Credentials must self-validate before we go on the wire.
        int64_t now = static_cast<int64_t>(::time(nullptr));
        for (const Certificate& cert : cred.certificates)
            validate(cert, as_span(ca_cert.dsa_public), now);
        return {std::move(cred), ca_cert.dsa_public};
    }

    static Certificate from_pem_or_der(const std::string& path) {
        return decode_certificate(as_span(read_input_auto(path)));
    }
};

void apply_env_overrides(net::PeerConfig& config) {
    if (const char* window = std::getenv("PQKEX_FRESHNESS_WINDOW"))
        config.freshness_window = std::stoll(window);
    if (const char* capacity = std::getenv("PQKEX_TABLE_CAPACITY"))
        config.table_capacity = static_cast<size_t>(std::stoull(capacity));
}

void split_host_port(const std::string& text, std::string& host, uint16_t& port) {
    size_t colon = text.rfind(':');
    if (colon == std::string::npos) fail(Errc::BadValue, "address must be host:port");
    host = text.substr(0, colon);
    port = static_cast<uint16_t>(std::stoul(text.substr(colon + 1)));
}

int run(int argc, char** argv) {
    CLI::App app{"post-quantum bidirectional-authentication key exchange toolkit"};
    app.require_subcommand(1);

    // ---- keygen ----
    auto* keygen_cmd = app.add_subcommand("keygen", "generate DSA and KEM key pairs");
    std::string kg_suite, kg_out;
    bool kg_json = false;
    keygen_cmd->add_option("--suite", kg_suite, "cipher suite")->required();
    keygen_cmd->add_option("--out", kg_out, "output path prefix")->required();
    keygen_cmd->add_flag("--json", kg_json, "machine-readable output");
    keygen_cmd->callback([&] {
        Suite suite = require_suite(kg_suite);
        DsaKeyPair dsa = dsa_keygen(suite.dsa, SystemRandom::instance());
        KemKeyPair kem = kem_keygen(suite.kem, SystemRandom::instance());
        save_dsa_keypair(kg_out + ".dsa.key", dsa);
        save_kem_keypair(kg_out + ".kem.key", kem);
        if (kg_json) {
            json j;
            j["dsa_algorithm"] = params(suite.dsa).name;
            j["kem_algorithm"] = params(suite.kem).name;
            j["dsa_public_bytes"] = dsa.public_key.size();
            j["kem_public_bytes"] = kem.public_key.size();
            j["files"] = {kg_out + ".dsa.key", kg_out + ".kem.key"};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "wrote " << kg_out << ".dsa.key (" << params(suite.dsa).name
                      << ", public " << dsa.public_key.size() << " bytes)\n";
            std::cout << "wrote " << kg_out << ".kem.key (" << params(suite.kem).name
                      << ", public " << kem.public_key.size() << " bytes)\n";
        }
    });

    // ---- issue ----
    auto* issue_cmd = app.add_subcommand("issue", "issue a certificate");
    std::string is_ca_key, is_ca_cert, is_scheme, is_dsa_key, is_kem_key;
    std::string is_subject, is_issuer, is_serial, is_not_before, is_not_after, is_out;
    bool is_self_signed = false, is_json = false;
    issue_cmd->add_option("--ca-key", is_ca_key, "CA DSA key pair file")->required();
    issue_cmd->add_option("--ca-cert", is_ca_cert, "CA certificate (for the issuer name)");
    issue_cmd->add_option("--scheme", is_scheme, "certificate scheme")->required();
    issue_cmd->add_option("--dsa-key", is_dsa_key, "subject DSA key pair file");
    issue_cmd->add_option("--kem-key", is_kem_key, "subject KEM key pair file");
    issue_cmd->add_option("--subject", is_subject, "subject CommonName")->required();
    issue_cmd->add_option("--issuer", is_issuer, "issuer CommonName override");
    issue_cmd->add_option("--serial", is_serial, "serial (hex, random when absent)");
    issue_cmd->add_option("--not-before", is_not_before, "validity start");
    issue_cmd->add_option("--not-after", is_not_after, "validity end");
    issue_cmd->add_option("--out", is_out, "output certificate path")->required();
    issue_cmd->add_flag("--self-signed", is_self_signed, "CA bootstrap: subject signs itself");
    issue_cmd->add_flag("--json", is_json, "machine-readable output");
    issue_cmd->callback([&] {
        auto scheme = parse_scheme(is_scheme);
        if (!scheme) fail(Errc::BadValue, "unknown scheme " + is_scheme);
        DsaKeyPair ca_keys = load_dsa_keypair(is_ca_key);

        CaContext ca;
        ca.ca_keys = ca_keys;
        ca.suite.dsa = ca_keys.algorithm;
        ca.suite.level = level_of(ca_keys.algorithm);
        ca.suite.kem = kem_for_level(ca.suite.level);

        std::string issuer = is_issuer;
        if (is_self_signed && issuer.empty()) issuer = is_subject;
        if (!is_self_signed) {
            if (is_ca_cert.empty())
                fail(Errc::BadValue, "--ca-cert is required unless --self-signed");
            Certificate ca_cert = CredentialArgs::from_pem_or_der(is_ca_cert);
            if (issuer.empty()) issuer = ca_cert.subject_common_name;
        }

        int64_t now = static_cast<int64_t>(::time(nullptr));
        CertTemplate tmpl;
        tmpl.subject_common_name = is_subject;
        tmpl.issuer_common_name = issuer;
        tmpl.serial = parse_serial(is_serial, SystemRandom::instance());
        tmpl.not_before = is_not_before.empty() ? now : parse_time(is_not_before);
        tmpl.not_after =
            is_not_after.empty() ? now + 10 * 365 * 86400ll : parse_time(is_not_after);

        std::optional<Bytes> dsa_pk, kem_pk;
        if (*scheme != CertScheme::PureKem) {
            if (is_self_signed && is_dsa_key.empty()) {
                dsa_pk = ca_keys.public_key;
            } else {
                if (is_dsa_key.empty()) fail(Errc::BadValue, "--dsa-key is required");
                dsa_pk = load_dsa_keypair(is_dsa_key).public_key;
            }
        }
        if (*scheme != CertScheme::PureDsa) {
            if (is_kem_key.empty()) fail(Errc::BadValue, "--kem-key is required");
            kem_pk = load_kem_keypair(is_kem_key).public_key;
        }

        Certificate cert = issue(ca, tmpl, *scheme, dsa_pk, kem_pk);
        std::string pem = to_pem(cert);
        write_file(is_out, ByteSpan(reinterpret_cast<const uint8_t*>(pem.data()), pem.size()));
        if (is_json) {
            json j = cert_summary_json(cert);
            j["file"] = is_out;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "wrote " << is_out << " (" << cert.encoded.size() << " bytes DER)\n";
        }
    });

    // ---- validate ----
    auto* validate_cmd = app.add_subcommand("validate", "validate a certificate");
    std::string va_cert, va_ca_cert, va_at;
    bool va_json = false;
    validate_cmd->add_option("--cert", va_cert, "certificate to validate")->required();
    validate_cmd->add_option("--ca-cert", va_ca_cert, "CA certificate")->required();
    validate_cmd->add_option("--at", va_at, "validation time (default: now)");
    validate_cmd->add_flag("--json", va_json, "machine-readable output");
    validate_cmd->callback([&] {
        Certificate cert = CredentialArgs::from_pem_or_der(va_cert);
        Certificate ca_cert = CredentialArgs::from_pem_or_der(va_ca_cert);
        int64_t at = va_at.empty() ? static_cast<int64_t>(::time(nullptr)) : parse_time(va_at);
        ExtractedKeys keys = validate(cert, as_span(ca_cert.dsa_public), at);
        if (va_json) {
            json j = cert_summary_json(cert);
            j["valid"] = true;
            j["has_kem_key"] = keys.kem_public.has_value();
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "certificate valid (" << scheme_name(cert.scheme) << ")\n";
        }
    });

    // ---- inspect ----
    auto* inspect_cmd = app.add_subcommand("inspect", "show certificate or message fields");
    std::string in_path;
    bool in_json = false;
    inspect_cmd->add_option("--in", in_path, "certificate (PEM/DER) or message (DER)")
        ->required();
    inspect_cmd->add_flag("--json", in_json, "machine-readable output");
    inspect_cmd->callback([&] {
        Bytes raw = read_input_auto(in_path);
        // Certificates and messages are both SEQUENCEs; try the certificate
        // parse first, then the message parse.
        try {
            Certificate cert = decode_certificate(as_span(raw));
            if (in_json)
                std::cout << cert_summary_json(cert).dump(2) << "\n";
            else
                std::cout << cert_summary_text(cert);
            return;
        } catch (const Error&) {
        }
        SignedData msg = decode_message(as_span(raw));
        if (in_json) {
            json j;
            j["message_type"] = message_type_name(msg.content.message_type);
            j["signing_time"] = msg.signer.signing_time;
            j["signer_serial"] = hex_encode(as_span(msg.signer.signer_serial));
            j["signature_algorithm"] = params(msg.signer.signature_algorithm).name;
            if (msg.content.payload) {
                j["payload_algorithm"] = params(msg.content.payload->algorithm).name;
                j["payload_bytes"] = msg.content.payload->bytes.size();
            }
            if (msg.content.peer_message_id)
                j["peer_message_id"] = hex_encode(ByteSpan(msg.content.peer_message_id->data(),
                                                           msg.content.peer_message_id->size()));
            json certs = json::array();
            for (const Certificate& c : msg.certificates) certs.push_back(cert_summary_json(c));
            j["certificates"] = certs;
            j["encoded_length"] = msg.encoded.size();
            j["message_id"] = hex_encode(ByteSpan(message_id(msg).data(), 8));
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "messageType:   " << message_type_name(msg.content.message_type) << "\n";
            std::cout << "signing time:  " << msg.signer.signing_time << "\n";
            std::cout << "signer serial: " << hex_encode(as_span(msg.signer.signer_serial))
                      << "\n";
            std::cout << "signature alg: " << params(msg.signer.signature_algorithm).name
                      << "\n";
            if (msg.content.payload)
                std::cout << "payload:       " << params(msg.content.payload->algorithm).name
                          << " ciphertext, " << msg.content.payload->bytes.size() << " bytes\n";
            if (msg.content.peer_message_id)
                std::cout << "peer msg id:   "
                          << hex_encode(ByteSpan(msg.content.peer_message_id->data(), 8)) << "\n";
            std::cout << "certificates:  " << msg.certificates.size() << "\n";
            for (const Certificate& c : msg.certificates)
                std::cout << "  - " << scheme_name(c.scheme) << " for " << c.subject_common_name
                          << " (" << c.encoded.size() << " bytes)\n";
            std::cout << "message id:    " << hex_encode(ByteSpan(message_id(msg).data(), 8))
                      << "\n";
            std::cout << "encoded:       " << msg.encoded.size() << " bytes\n";
        }
    });

    // ---- decode ----
    auto* decode_cmd = app.add_subcommand("decode", "decode DER");
    std::string de_path;
    bool de_dump = false;
    decode_cmd->add_option("--in", de_path, "DER (or PEM) input file")->required();
    decode_cmd->add_flag("--dump", de_dump, "pretty-print the TLV tree");
    decode_cmd->callback([&] {
        Bytes raw = read_input_auto(de_path);
        der::TlvNode node = der::decode(as_span(raw));
        if (de_dump)
            std::cout << der::dump(node);
        else
            std::cout << "valid DER, " << raw.size() << " bytes\n";
    });

    // ---- bench ----
    auto* bench_cmd = app.add_subcommand("bench", "regenerate the message-length tables");
    std::string be_family = "mldsa", be_format = "markdown", be_out;
    bool be_include_ca = false, be_timings = false;
    size_t be_iterations = 30;
    uint64_t be_seed = 1;
    bench_cmd->add_option("--family", be_family, "mldsa | slhdsa-s | slhdsa-f");
    bench_cmd->add_option("--format", be_format, "csv | markdown");
    bench_cmd->add_flag("--include-ca-cert", be_include_ca,
                        "also carry the CA certificate in every message");
    bench_cmd->add_flag("--timings", be_timings, "measure per-step timings as well");
    bench_cmd->add_option("--iterations", be_iterations, "timing iterations (>= 30)");
    bench_cmd->add_option("--out", be_out, "write the report to a file");
    bench_cmd->add_option("--seed", be_seed, "deterministic key material seed");
    bench_cmd->callback([&] {
        auto family = parse_family(be_family);
        if (!family) fail(Errc::BadValue, "unknown family " + be_family);
        bench::ReportFormat format;
        if (be_format == "csv")
            format = bench::ReportFormat::Csv;
        else if (be_format == "markdown")
            format = bench::ReportFormat::Markdown;
        else
            fail(Errc::BadValue, "unknown format " + be_format);

        bench::BenchConfig config;
        config.include_ca_cert = be_include_ca;
        config.seed = be_seed;

        bench::FamilyTables tables = bench::run_family_tables(*family, config);
        std::string report = bench::emit_report(tables.rows, format);

        if (be_timings) {
            std::vector<bench::TimingRow> timing_rows;
            for (SecurityLevel level : kAllLevels) {
                Suite suite = suite_for(level, *family);
                for (bench::Method method : bench::kAllMethods)
                    timing_rows.push_back(
                        bench::measure_timings(suite, method, be_iterations, config));
            }
            report += "\n";
            report += bench::emit_timing_report(timing_rows, format);
        }

        if (be_out.empty()) {
            std::cout << report;
        } else {
            write_file(be_out,
                       ByteSpan(reinterpret_cast<const uint8_t*>(report.data()), report.size()));
            std::cout << "wrote " << be_out << "\n";
        }

        std::vector<std::string> violations = bench::check_table_invariants(tables);
        for (const std::string& v : violations) std::cerr << "invariant violated: " << v << "\n";
        if (!violations.empty()) fail(Errc::BadValue, "table invariants violated");
    });

    // ---- serve / connect ----
    auto add_peer_command = [&](const char* name, const char* help, bool is_server) {
        auto* cmd = app.add_subcommand(name, help);
        auto args = std::make_shared<CredentialArgs>();
        auto address = std::make_shared<std::string>("127.0.0.1:7788");
        auto transcript = std::make_shared<std::string>();
        auto send_message = std::make_shared<std::string>();
        auto expect = std::make_shared<int>(0);
        auto once = std::make_shared<bool>(false);
        auto echo = std::make_shared<bool>(false);
        cmd->add_option(is_server ? "--listen" : "--peer", *address, "host:port");
        args->add_to(cmd);
        cmd->add_option("--transcript", *transcript, "dump raw frames to a file");
        cmd->add_option("--send", *send_message, "send one message");
        cmd->add_option("--expect", *expect, "wait for N chat messages then exit");
        if (is_server) {
            cmd->add_flag("--once", *once, "serve a single connection then exit");
            cmd->add_flag("--echo", *echo, "echo received chat back, re-sealed");
        }
        cmd->callback([=] {
            net::PeerConfig config;
            split_host_port(*address, config.host, config.port);
            auto [credential, ca_public] = args->load();
            config.credential = std::move(credential);
            config.ca_public = std::move(ca_public);
            config.transcript_path = *transcript;
            if (!send_message->empty()) config.send_message = *send_message;
            config.expect_messages = *expect;
            config.once = *once;
            config.echo = *echo;
            apply_env_overrides(config);
            int status = is_server ? net::serve(config) : net::connect_peer(config);
            if (status != 0) fail(Errc::IoError, "session failed");
        });
    };
    add_peer_command("serve", "run the responder side of the chat demo", true);
    add_peer_command("connect", "run the initiator side of the chat demo", false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage error
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

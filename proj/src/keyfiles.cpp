#include "pqkex/keyfiles.hpp"

#include <cstring>
#include <fstream>

#include "pqkex/errors.hpp"

namespace pqkex {

namespace {

constexpr size_t kTagBytes = 8;

Bytes make_key_blob(const char* tag, ByteSpan secret, ByteSpan pub) {
    Bytes out(kTagBytes + secret.size() + pub.size());
    std::memcpy(out.data(), tag, kTagBytes);
    std::memcpy(out.data() + kTagBytes, secret.data(), secret.size());
    std::memcpy(out.data() + kTagBytes + secret.size(), pub.data(), pub.size());
    return out;
}

}  // namespace

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoError, "cannot open " + path);
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

void write_file(const std::string& path, ByteSpan data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoError, "cannot create " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) fail(Errc::IoError, "write failed for " + path);
}

void save_dsa_keypair(const std::string& path, const DsaKeyPair& key) {
    const DsaParams& p = params(key.algorithm);
    write_file(path, as_span(make_key_blob(p.file_tag, as_span(key.secret_key),
                                           as_span(key.public_key))));
}

void save_kem_keypair(const std::string& path, const KemKeyPair& key) {
    const KemParams& p = params(key.algorithm);
    write_file(path, as_span(make_key_blob(p.file_tag, as_span(key.secret_key),
                                           as_span(key.public_key))));
}

DsaKeyPair load_dsa_keypair(const std::string& path) {
    Bytes blob = read_file(path);
    if (blob.size() < kTagBytes) fail(Errc::BadValue, "key file too short");
    for (int i = 0; i < 9; ++i) {
        auto alg = static_cast<DsaAlgorithm>(i);
        const DsaParams& p = params(alg);
        if (std::memcmp(blob.data(), p.file_tag, kTagBytes) != 0) continue;
        if (blob.size() != kTagBytes + p.secret_key_bytes + p.public_key_bytes)
            fail(Errc::LengthMismatch, "key file size does not match " + std::string(p.name));
        DsaKeyPair key;
        key.algorithm = alg;
        key.secret_key.assign(blob.begin() + kTagBytes,
                              blob.begin() + static_cast<ptrdiff_t>(kTagBytes + p.secret_key_bytes));
        key.public_key.assign(blob.begin() + static_cast<ptrdiff_t>(kTagBytes + p.secret_key_bytes),
                              blob.end());
        return key;
    }
    fail(Errc::BadValue, "unknown DSA key file tag in " + path);
}

KemKeyPair load_kem_keypair(const std::string& path) {
    Bytes blob = read_file(path);
    if (blob.size() < kTagBytes) fail(Errc::BadValue, "key file too short");
    for (int i = 0; i < 3; ++i) {
        auto alg = static_cast<KemAlgorithm>(i);
        const KemParams& p = params(alg);
        if (std::memcmp(blob.data(), p.file_tag, kTagBytes) != 0) continue;
        if (blob.size() != kTagBytes + p.secret_key_bytes + p.public_key_bytes)
            fail(Errc::LengthMismatch, "key file size does not match " + std::string(p.name));
        KemKeyPair key;
        key.algorithm = alg;
        key.secret_key.assign(blob.begin() + kTagBytes,
                              blob.begin() + static_cast<ptrdiff_t>(kTagBytes + p.secret_key_bytes));
        key.public_key.assign(blob.begin() + static_cast<ptrdiff_t>(kTagBytes + p.secret_key_bytes),
                              blob.end());
        return key;
    }
    fail(Errc::BadValue, "unknown KEM key file tag in " + path);
}

}  // namespace pqkex

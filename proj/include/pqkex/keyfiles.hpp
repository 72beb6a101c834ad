#pragma once

#include <string>

#include "pqkex/crypto.hpp"

namespace pqkex {

// Key files: 8-byte ASCII algorithm tag, then the secret key, then the
// public key, both at the algorithm's fixed size. Layout documented in
// docs/wire_format.md.

void save_dsa_keypair(const std::string& path, const DsaKeyPair& key);
void save_kem_keypair(const std::string& path, const KemKeyPair& key);
DsaKeyPair load_dsa_keypair(const std::string& path);
KemKeyPair load_kem_keypair(const std::string& path);

Bytes read_file(const std::string& path);
void write_file(const std::string& path, ByteSpan data);

}  // namespace pqkex

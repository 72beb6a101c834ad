#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "pqkex/bytes.hpp"
#include "pqkex/handshake.hpp"

namespace pqkex::net {

// Length-prefixed TCP framing: 4-byte big-endian length, then a kind byte,
// then the body. length == 1 + len(body).
inline constexpr uint8_t kFrameHandshake = 0x01;
inline constexpr uint8_t kFrameChat = 0x02;
inline constexpr size_t kMaxFrameBytes = 16 * 1024 * 1024;

struct Frame {
    uint8_t kind = 0;
    Bytes body;
};

Bytes encode_frame(const Frame& frame);
Frame decode_frame(ByteSpan data);  // data excludes the 4-byte prefix

/// Blocking socket I/O; throws Errc::IoError on short reads/writes and
/// oversize frames. When `transcript` is non-null every raw frame
/// (including the length prefix) is appended to it.
void write_frame(int fd, const Frame& frame, Bytes* transcript);
Frame read_frame(int fd, Bytes* transcript);

// Chat envelope: 8-byte big-endian sequence number, then the AEAD output.
// Nonce = direction byte || 3 zero bytes || sequence (big-endian).
inline constexpr uint8_t kDirInitiator = 0x01;
inline constexpr uint8_t kDirResponder = 0x02;

Bytes seal_chat(const SessionKey& key, uint8_t direction, uint64_t sequence,
                std::string_view text);
/// Rejects replayed or reordered envelopes: sequence must exceed last_seen.
std::string open_chat(const SessionKey& key, uint8_t direction, uint64_t& last_seen,
                      ByteSpan envelope);

struct PeerConfig {
    std::string host = "127.0.0.1";
    uint16_t port = 7788;
    Credential credential;
    Bytes ca_public;
    int64_t freshness_window = kDefaultFreshnessWindow;
    size_t table_capacity = 65536;
    std::string transcript_path;  // empty = no dump

    // Scripted mode for tests and demos. Interactive chat when both unset.
    std::optional<std::string> send_message;
    int expect_messages = 0;
    bool once = false;  // serve: handle a single connection then return
    bool echo = false;  // serve: echo decrypted chat back, re-sealed
    std::function<void(const std::string&)> on_line = {};  // output sink; default stdout
};

/// Responder loop. Returns 0 on clean shutdown, 1 on handshake/chat failure.
int serve(const PeerConfig& config);

/// Initiator: handshake then chat. Returns 0 on success.
int connect_peer(const PeerConfig& config);

std::string key_fingerprint(const SessionKey& key);  // 16 hex chars

}  // namespace pqkex::net

#include "pqkex/netdemo.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <ctime>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "pqkex/errors.hpp"
#include "pqkex/keyfiles.hpp"

namespace pqkex::net {

namespace {

void write_all(int fd, ByteSpan data) {
    size_t done = 0;
    while (done < data.size()) {
        ssize_t n = ::write(fd, data.data() + done, data.size() - done);
        if (n <= 0) {
            if (n < 0 && errno == EINTR) continue;
            fail(Errc::IoError, "socket write failed");
        }
        done += static_cast<size_t>(n);
    }
}

void read_all(int fd, uint8_t* out, size_t len) {
    size_t done = 0;
    while (done < len) {
        ssize_t n = ::read(fd, out + done, len - done);
        if (n == 0) fail(Errc::IoError, "peer closed the connection");
        if (n < 0) {
            if (errno == EINTR) continue;
            fail(Errc::IoError, "socket read failed");
        }
        done += static_cast<size_t>(n);
    }
}

struct Fd {
    int fd = -1;
    ~Fd() { reset(); }
    void reset() {
        if (fd >= 0) ::close(fd);
        fd = -1;
    }
    int release() {
        int f = fd;
        fd = -1;
        return f;
    }
};

void emit(const PeerConfig& config, const std::string& line) {
    if (config.on_line) {
        config.on_line(line);
    } else {
        std::cout << line << "\n" << std::flush;
    }
}

int64_t wall_clock() { return static_cast<int64_t>(::time(nullptr)); }

std::array<uint8_t, 12> chat_nonce(uint8_t direction, uint64_t sequence) {
    std::array<uint8_t, 12> nonce{};
    nonce[0] = direction;
    for (int i = 0; i < 8; ++i)
        nonce[4 + i] = static_cast<uint8_t>(sequence >> (8 * (7 - i)));
    return nonce;
}

struct Transcript {
    std::mutex mutex;
    Bytes data;
    std::string path;

    Bytes* buffer() { return path.empty() ? nullptr : &data; }
    void flush() {
        if (!path.empty()) write_file(path, as_span(data));
    }
};

/// One established chat session over a connected socket.
struct ChatSession {
    int fd;
    SessionKey key;
    uint8_t send_direction;
    uint64_t send_seq = 0;
    uint64_t recv_seq = 0;
    std::mutex write_mutex;
    Transcript* transcript;

    void send_text(std::string_view text) {
        std::lock_guard lock(write_mutex);
        Frame frame{kFrameChat, seal_chat(key, send_direction, ++send_seq, text)};
        write_frame(fd, frame, transcript ? transcript->buffer() : nullptr);
    }
};

/// Receives chat frames until the peer closes; returns false on protocol
/// violations (which terminate the session).
bool chat_receive_loop(const PeerConfig& config, ChatSession& session, int limit) {
    uint8_t peer_direction =
        session.send_direction == kDirInitiator ? kDirResponder : kDirInitiator;
    int received = 0;
    while (limit <= 0 || received < limit) {
        Frame frame;
        try {
            frame = read_frame(session.fd, session.transcript ? session.transcript->buffer()
                                                              : nullptr);
        } catch (const Error&) {
            return limit <= 0;  // EOF is a clean end in open-ended mode
        }
        if (frame.kind != kFrameChat) {
            emit(config, "! unexpected frame kind, closing");
            return false;
        }
        std::string text;
        try {
            text = open_chat(session.key, peer_direction, session.recv_seq, as_span(frame.body));
        } catch (const Error& e) {
            emit(config, std::string("! chat rejected: ") + e.what());
            return false;
        }
        emit(config, "peer> " + text);
        ++received;
        if (config.echo) session.send_text(text);
    }
    return true;
}

void run_scripted_chat(const PeerConfig& config, ChatSession& session) {
    if (config.send_message) session.send_text(*config.send_message);
    if (config.expect_messages > 0 || config.echo) {
        if (!chat_receive_loop(config, session,
                               config.echo ? 0 : config.expect_messages))
            fail(Errc::AeadAuthFailure, "chat session terminated");
    }
}

void run_interactive_chat(const PeerConfig& config, ChatSession& session) {
    std::thread reader([&config, &session] { chat_receive_loop(config, session, 0); });
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line == "/quit") break;
        session.send_text(line);
    }
    ::shutdown(session.fd, SHUT_RDWR);
    reader.join();
}

}  // namespace

Bytes encode_frame(const Frame& frame) {
    size_t len = 1 + frame.body.size();
    if (len > kMaxFrameBytes) fail(Errc::IoError, "frame too large");
    Bytes out;
    out.reserve(4 + len);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(len >> (8 * (3 - i))));
    out.push_back(frame.kind);
    out.insert(out.end(), frame.body.begin(), frame.body.end());
    return out;
}

Frame decode_frame(ByteSpan data) {
    if (data.empty()) fail(Errc::IoError, "empty frame");
    Frame frame;
    frame.kind = data[0];
    frame.body.assign(data.begin() + 1, data.end());
    return frame;
}

void write_frame(int fd, const Frame& frame, Bytes* transcript) {
    Bytes wire = encode_frame(frame);
    if (transcript) transcript->insert(transcript->end(), wire.begin(), wire.end());
    write_all(fd, as_span(wire));
}

Frame read_frame(int fd, Bytes* transcript) {
    uint8_t prefix[4];
    read_all(fd, prefix, 4);
    uint32_t len = (static_cast<uint32_t>(prefix[0]) << 24) |
                   (static_cast<uint32_t>(prefix[1]) << 16) |
                   (static_cast<uint32_t>(prefix[2]) << 8) | prefix[3];
    if (len == 0 || len > kMaxFrameBytes) fail(Errc::IoError, "frame length out of range");
    Bytes payload(len);
    read_all(fd, payload.data(), len);
    if (transcript) {
        transcript->insert(transcript->end(), prefix, prefix + 4);
        transcript->insert(transcript->end(), payload.begin(), payload.end());
    }
    return decode_frame(as_span(payload));
}

Bytes seal_chat(const SessionKey& key, uint8_t direction, uint64_t sequence,
                std::string_view text) {
    auto nonce = chat_nonce(direction, sequence);
    Bytes sealed = aead_seal(ByteSpan(key.bytes.data(), key.bytes.size()),
                             ByteSpan(nonce.data(), nonce.size()),
                             ByteSpan(reinterpret_cast<const uint8_t*>(text.data()), text.size()));
    Bytes envelope;
    envelope.reserve(8 + sealed.size());
    for (int i = 0; i < 8; ++i)
        envelope.push_back(static_cast<uint8_t>(sequence >> (8 * (7 - i))));
    envelope.insert(envelope.end(), sealed.begin(), sealed.end());
    return envelope;
}

std::string open_chat(const SessionKey& key, uint8_t direction, uint64_t& last_seen,
                      ByteSpan envelope) {
    if (envelope.size() < 8 + kAeadTagBytes) fail(Errc::AeadAuthFailure, "envelope too short");
    uint64_t sequence = 0;
    for (int i = 0; i < 8; ++i) sequence = (sequence << 8) | envelope[i];
    if (sequence <= last_seen) fail(Errc::AeadAuthFailure, "replayed or reordered sequence");
    auto nonce = chat_nonce(direction, sequence);
    Bytes plain = aead_open(ByteSpan(key.bytes.data(), key.bytes.size()),
                            ByteSpan(nonce.data(), nonce.size()), envelope.subspan(8));
    last_seen = sequence;
    return std::string(plain.begin(), plain.end());
}

std::string key_fingerprint(const SessionKey& key) {
    auto id = hashed_id8(ByteSpan(key.bytes.data(), key.bytes.size()));
    return hex_encode(ByteSpan(id.data(), id.size()));
}

namespace {

/// Responder side of one connection: three handshake frames, then chat.
int serve_connection(const PeerConfig& config, int fd, SessionTable& table,
                     Transcript& transcript) {
    HandshakeOptions opts{config.freshness_window};
    try {
        Frame f1 = read_frame(fd, transcript.buffer());
        if (f1.kind != kFrameHandshake) fail(Errc::IoError, "expected handshake frame");
        SignedData r1 = decode_message(as_span(f1.body));
        SignedData r2 = responder_on_request(r1, config.credential, table,
                                             as_span(config.ca_public), wall_clock(),
                                             SystemRandom::instance(), opts);
        write_frame(fd, Frame{kFrameHandshake, r2.encoded}, transcript.buffer());

        Frame f3 = read_frame(fd, transcript.buffer());
        if (f3.kind != kFrameHandshake) fail(Errc::IoError, "expected handshake frame");
        SignedData r3 = decode_message(as_span(f3.body));
        SessionKey key = responder_on_ack(r3, config.credential, table, wall_clock(), opts);
        emit(config, "session established, key fingerprint " + key_fingerprint(key));

        ChatSession session{fd, key, kDirResponder, 0, 0, {}, &transcript};
        if (config.send_message || config.expect_messages > 0 || config.echo) {
            run_scripted_chat(config, session);
        } else {
            run_interactive_chat(config, session);
        }
        return 0;
    } catch (const Error& e) {
        // Silent on the wire; surface the diagnostic locally and drop.
        emit(config, std::string("! handshake/chat failed: ") + e.what());
        return 1;
    }
}

}  // namespace

int serve(const PeerConfig& config) {
    Fd listener;
    listener.fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listener.fd < 0) fail(Errc::IoError, "socket failed");
    int one = 1;
    ::setsockopt(listener.fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(config.port);
    if (::inet_pton(AF_INET, config.host.c_str(), &addr.sin_addr) != 1)
        fail(Errc::IoError, "bad listen address " + config.host);
    if (::bind(listener.fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
        fail(Errc::IoError, "bind failed on port " + std::to_string(config.port));
    if (::listen(listener.fd, 16) != 0) fail(Errc::IoError, "listen failed");

    SessionTable table(config.table_capacity);
    Transcript transcript;
    transcript.path = config.transcript_path;

    int last_status = 0;
    std::vector<std::thread> workers;
    for (;;) {
        Fd conn;
        conn.fd = ::accept(listener.fd, nullptr, nullptr);
        if (conn.fd < 0) {
            if (errno == EINTR) continue;
            fail(Errc::IoError, "accept failed");
        }
        if (config.once) {
            last_status = serve_connection(config, conn.fd, table, transcript);
            break;
        }
        int fd = conn.release();
        workers.emplace_back([&config, fd, &table, &transcript] {
            serve_connection(config, fd, table, transcript);
            ::close(fd);
        });
    }
    for (std::thread& t : workers) t.join();
    transcript.flush();
    return last_status;
}

int connect_peer(const PeerConfig& config) {
    Fd conn;
    conn.fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (conn.fd < 0) fail(Errc::IoError, "socket failed");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(config.port);
    if (::inet_pton(AF_INET, config.host.c_str(), &addr.sin_addr) != 1)
        fail(Errc::IoError, "bad peer address " + config.host);
    if (::connect(conn.fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
        fail(Errc::IoError, "connection refused by " + config.host);

    Transcript transcript;
    transcript.path = config.transcript_path;
    HandshakeOptions opts{config.freshness_window};

    try {
        auto [session, r1] =
            initiator_start(config.credential, config.credential.suite, wall_clock());
        write_frame(conn.fd, Frame{kFrameHandshake, r1.encoded}, transcript.buffer());

        Frame f2 = read_frame(conn.fd, transcript.buffer());
        if (f2.kind != kFrameHandshake) fail(Errc::IoError, "expected handshake frame");
        SignedData r2 = decode_message(as_span(f2.body));
        auto [r3, key] = initiator_on_response(session, r2, as_span(config.ca_public),
                                               wall_clock(), SystemRandom::instance(), opts);
        write_frame(conn.fd, Frame{kFrameHandshake, r3.encoded}, transcript.buffer());
        emit(config, "session established, key fingerprint " + key_fingerprint(key));

        ChatSession chat{conn.fd, key, kDirInitiator, 0, 0, {}, &transcript};
        if (config.send_message || config.expect_messages > 0) {
            run_scripted_chat(config, chat);
        } else {
            run_interactive_chat(config, chat);
        }
        transcript.flush();
        return 0;
    } catch (const Error& e) {
        emit(config, std::string("! handshake/chat failed: ") + e.what());
        transcript.flush();
        return 1;
    }
}

}  // namespace pqkex::net

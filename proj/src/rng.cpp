#include "pqkex/rng.hpp"

#include <sys/random.h>

#include <cerrno>
#include <cstring>

#include "pqkex/errors.hpp"

extern "C" {
#include "fips202.h"
}

namespace pqkex {
namespace detail {

static RandomSource*& current_pqclean_rng() {
    thread_local RandomSource* current = nullptr;
    return current;
}

}  // namespace detail

void SystemRandom::fill(std::span<uint8_t> out) {
    size_t done = 0;
    while (done < out.size()) {
        ssize_t got = getrandom(out.data() + done, out.size() - done, 0);
        if (got < 0) {
            if (errno == EINTR) continue;
            fail(Errc::RandomFailure, "getrandom failed");
        }
        done += static_cast<size_t>(got);
    }
}

SystemRandom& SystemRandom::instance() {
    static SystemRandom rng;
    return rng;
}

DeterministicRandom::DeterministicRandom(ByteSpan seed) {
    shake256(key_.data(), key_.size(), seed.data(), seed.size());
}

DeterministicRandom::DeterministicRandom(uint64_t seed) {
    uint8_t raw[8];
    for (int i = 0; i < 8; ++i) raw[i] = static_cast<uint8_t>(seed >> (8 * i));
    shake256(key_.data(), key_.size(), raw, sizeof raw);
}

void DeterministicRandom::fill(std::span<uint8_t> out) {
    size_t done = 0;
    while (done < out.size()) {
        if (buffer_pos_ == buffer_.size()) {
            // Next block: SHAKE-256(key || counter), 1 KiB at a time.
            uint8_t block_input[40];
            std::memcpy(block_input, key_.data(), key_.size());
            for (int i = 0; i < 8; ++i)
                block_input[32 + i] = static_cast<uint8_t>(counter_ >> (8 * i));
            ++counter_;
            buffer_.resize(1024);
            shake256(buffer_.data(), buffer_.size(), block_input, sizeof block_input);
            buffer_pos_ = 0;
        }
        size_t take = std::min(out.size() - done, buffer_.size() - buffer_pos_);
        std::memcpy(out.data() + done, buffer_.data() + buffer_pos_, take);
        done += take;
        buffer_pos_ += take;
    }
}

namespace detail {

RngScope::RngScope(RandomSource& source) {
    previous_ = current_pqclean_rng();
    current_pqclean_rng() = &source;
}

RngScope::~RngScope() { current_pqclean_rng() = previous_; }

}  // namespace detail
}  // namespace pqkex

// PQClean's schemes pull randomness from this symbol (see
// third_party/pqclean/common/randombytes.h). Route it to the thread's
// installed source, defaulting to the OS.
extern "C" int PQCLEAN_randombytes(uint8_t* output, size_t n) {
    try {
        pqkex::RandomSource* src = pqkex::detail::current_pqclean_rng();
        if (src == nullptr) src = &pqkex::SystemRandom::instance();
        src->fill({output, n});
        return 0;
    } catch (...) {
        return -1;
    }
}

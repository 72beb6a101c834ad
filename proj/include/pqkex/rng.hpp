#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "pqkex/bytes.hpp"

namespace pqkex {

class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual void fill(std::span<uint8_t> out) = 0;

    Bytes bytes(size_t n) {
        Bytes out(n);
        fill(out);
        return out;
    }
};

/// OS randomness (getrandom / /dev/urandom).
class SystemRandom final : public RandomSource {
public:
    void fill(std::span<uint8_t> out) override;
    static SystemRandom& instance();
};

/// SHAKE-256 output stream over a seed. Same seed, same stream; used by the
/// tests and the benchmark harness for reproducible key material.
class DeterministicRandom final : public RandomSource {
public:
    explicit DeterministicRandom(ByteSpan seed);
    explicit DeterministicRandom(uint64_t seed);
    void fill(std::span<uint8_t> out) override;

private:
    std::array<uint8_t, 32> key_{};
    uint64_t counter_ = 0;
    Bytes buffer_;
    size_t buffer_pos_ = 0;
};

namespace detail {

/// Routes the PQClean randombytes() calls made below the C seam to `source`
/// for the lifetime of the scope (per thread). Installed by every keygen /
/// encapsulate / sign call, so primitive randomness always comes from the
/// caller-supplied RandomSource rather than an ambient global.
class RngScope {
public:
    explicit RngScope(RandomSource& source);
    ~RngScope();
    RngScope(const RngScope&) = delete;
    RngScope& operator=(const RngScope&) = delete;

private:
    RandomSource* previous_;
};

}  // namespace detail
}  // namespace pqkex

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace polsim {

/**
 * Philox4x32-10 counter-based generator (Salmon et al., SC'11).
 *
 * The 64-bit seed is the key. The 128-bit counter is split into a 64-bit
 * block index (words 0-1) and a 64-bit stream id (words 2-3), so
 * (seed, stream) pairs give independent, platform-independent sequences
 * without any shared state.
 */
class Philox4x32 {
public:
    using result_type = std::uint32_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream)
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        if (index_ == 4) {
            const Block counter{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
            buffer_ = bijection(counter, key_);
            ++block_;
            index_ = 0;
        }
        return buffer_[index_++];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform()
    {
        const std::uint64_t hi = (*this)() >> 5;
        const std::uint64_t lo = (*this)() >> 6;
        return (static_cast<double>(hi) * 67108864.0 + static_cast<double>(lo)) * (1.0 / 9007199254740992.0);
    }

    /// Ten rounds of the Philox S-box network.
    static Block bijection(Block counter, Key key)
    {
        constexpr std::uint32_t m0 = 0xD2511F53;
        constexpr std::uint32_t m1 = 0xCD9E8D57;
        constexpr std::uint32_t w0 = 0x9E3779B9;
        constexpr std::uint32_t w1 = 0xBB67AE85;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * counter[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * counter[2];
            counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ key[0], static_cast<std::uint32_t>(p1),
                       static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += w0;
            key[1] += w1;
        }
        return counter;
    }

private:
    Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Block buffer_{};
    int index_ = 4;
};

}  // namespace polsim

#pragma once

#include <array>
#include <cstdint>

namespace gmc {

/// Philox4x32-10 counter-based block function.
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter apply(Counter counter, Key key);
};

/// Reproducible random stream identified by (master_seed, lane_index).
///
/// The master seed is the Philox key; the lane index occupies the upper
/// 64 bits of the counter and the block position the lower 64 bits, so
/// deriving a lane is O(1) and lanes never overlap.
class Stream {
public:
    Stream(std::uint64_t master_seed, std::uint64_t lane_index);

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits.
    double next_uniform();

    /// Uniform on (0, 1); safe to feed into logarithms and quantiles.
    double next_open_uniform();

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t lane_index() const { return lane_index_; }

    /// Number of 64-bit words consumed so far.
    std::uint64_t position() const { return 2 * block_ - (buffered_ ? 1 : 0); }

private:
    void refill();

    std::uint64_t master_seed_;
    std::uint64_t lane_index_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> words_{};
    int buffered_ = 0;
};

Stream derive_stream(std::uint64_t master_seed, std::uint64_t lane_index);

}  // namespace gmc

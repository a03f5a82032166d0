#include "gmc/rand_streams.hpp"

namespace gmc {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;
constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;
constexpr int kRounds = 10;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

}  // namespace

Philox4x32::Counter Philox4x32::apply(Counter ctr, Key key) {
    for (int round = 0; round < kRounds; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMulA, ctr[0], hi0, lo0);
        mulhilo(kMulB, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

Stream::Stream(std::uint64_t master_seed, std::uint64_t lane_index)
    : master_seed_(master_seed), lane_index_(lane_index) {}

void Stream::refill() {
    const Philox4x32::Counter ctr{
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(lane_index_), static_cast<std::uint32_t>(lane_index_ >> 32)};
    const Philox4x32::Key key{static_cast<std::uint32_t>(master_seed_),
                              static_cast<std::uint32_t>(master_seed_ >> 32)};
    const auto out = Philox4x32::apply(ctr, key);
    words_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    words_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    ++block_;
    buffered_ = 2;
}

std::uint64_t Stream::next_u64() {
    if (buffered_ == 0) {
        refill();
    }
    return words_[2 - buffered_--];
}

double Stream::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::next_open_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

Stream derive_stream(std::uint64_t master_seed, std::uint64_t lane_index) {
    return Stream(master_seed, lane_index);
}

}  // namespace gmc

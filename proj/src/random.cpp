#include "regime/random.hpp"

namespace regime {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(prod >> 32);
    lo = static_cast<std::uint32_t>(prod);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

PhiloxStream::PhiloxStream(const SeedSpec& seed, Substream sub) noexcept
    : key_{static_cast<std::uint32_t>(seed.master_seed),
           static_cast<std::uint32_t>(seed.master_seed >> 32)},
      counter_{0u, static_cast<std::uint32_t>(sub), seed.replicate_index, seed.theta_index} {}

void PhiloxStream::refill() noexcept {
    block_ = philox4x32_10(counter_, key_);
    ++counter_[0];
    used_ = 0;
}

PhiloxStream::result_type PhiloxStream::operator()() noexcept {
    if (used_ > 2) refill();
    const auto lo = static_cast<std::uint64_t>(block_[static_cast<std::size_t>(used_)]);
    const auto hi = static_cast<std::uint64_t>(block_[static_cast<std::size_t>(used_ + 1)]);
    used_ += 2;
    return (hi << 32) | lo;
}

}  // namespace regime

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace regime {

// Identifies one random stream: a pure function of the triple.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint32_t theta_index = 0;
    std::uint32_t replicate_index = 0;
};

// Independent sub-streams drawn by one simulation.
enum class Substream : std::uint32_t { diffusion = 0, switching = 1, jumps = 2, initial = 3 };

/// Philox4x32-10 counter-based generator.
///
/// The key is the master seed; the counter is (block, substream, replicate,
/// theta). Distinct SeedSpec/Substream combinations therefore address
/// disjoint counter ranges and need no shared state. Satisfies
/// UniformRandomBitGenerator with 64-bit output.
class PhiloxStream {
public:
    using result_type = std::uint64_t;

    PhiloxStream(const SeedSpec& seed, Substream sub) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;  // 32-bit words consumed from block_
};

// Raw Philox4x32-10 block function, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

}  // namespace regime

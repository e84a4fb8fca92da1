#pragma once

#include <array>
#include <cstdint>

namespace timinghedge {

// Philox4x32-10 (Salmon et al., SC'11). Counter-based: the value stream is a
// pure function of (key, counter), so any (path, step) draw can be generated
// independently of worker assignment.
struct Philox4x32 {
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::uint64_t key,
                                              std::uint64_t ctr_lo,
                                              std::uint64_t ctr_hi) {
        std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
        std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
        std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
        std::uint32_t k0 = static_cast<std::uint32_t>(key);
        std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            c0 = n0;
            c1 = lo1;
            c2 = n2;
            c3 = lo0;
            k0 += kW0;
            k1 += kW1;
        }
        return {c0, c1, c2, c3};
    }
};

// Uniform in (0,1) from two 32-bit lanes (53-bit mantissa, never 0 or 1).
inline double uniform53(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t m =
        (static_cast<std::uint64_t>(hi) << 21) ^ (static_cast<std::uint64_t>(lo) >> 11);
    return (static_cast<double>(m & ((1ull << 53) - 1)) + 0.5) * 0x1.0p-53;
}

// Splittable per-(path, step) draws: lane 0/1 feed the Gaussian increment,
// lane 2/3 the bridge uniform. `stream` separates independent usages.
struct PathRng {
    std::uint64_t seed;
    std::uint64_t stream = 0;

    struct Draws {
        double u_normal;
        double u_bridge;
    };

    Draws at(std::uint64_t path, std::uint64_t step) const {
        const auto b = Philox4x32::block(seed, path, (stream << 32) | step);
        return {uniform53(b[0], b[1]), uniform53(b[2], b[3])};
    }
};

}  // namespace timinghedge

#pragma once
// Counter-based random streams.
//
// Every random draw in a simulation is addressed by (seed, domain, step, agent)
// rather than pulled from a shared sequential generator. A worker that handles
// agent i at step t therefore sees the same numbers no matter how the work is
// partitioned, which is what makes serial and threaded runs bit-identical.

#include <cstdint>

namespace impact_lattice {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Purpose tags keep the init, update and ordering streams disjoint.
enum class StreamDomain : std::uint64_t {
    init = 1,
    update = 2,
    order = 3,
    sustain_mc = 4,
};

/// Seed of ensemble member `run`. Part of the manifest contract:
/// seed_r = mix64(master + (r + 1) * 0x9E3779B97F4A7C15).
constexpr std::uint64_t derive_run_seed(std::uint64_t master, std::uint64_t run) noexcept {
    return mix64(master + (run + 1) * kGoldenGamma);
}

class CounterStream {
public:
    constexpr CounterStream(std::uint64_t seed, StreamDomain domain, std::uint64_t step,
                            std::uint64_t agent) noexcept
        : key_{mix64(mix64(mix64(seed ^ (static_cast<std::uint64_t>(domain) * kGoldenGamma)) + step) +
                     agent)} {}

    constexpr std::uint64_t next_u64() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * kGoldenGamma);
    }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n), n > 0.
    constexpr std::uint64_t below(std::uint64_t n) noexcept {
        // Lemire's multiply-shift; bias is at most n / 2^64.
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace impact_lattice

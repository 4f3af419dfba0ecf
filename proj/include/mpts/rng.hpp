#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace mpts {

/// SplitMix64 finalizer. A bijection on 64-bit words.
std::uint64_t splitmix64_mix(std::uint64_t x) noexcept;

/// xoshiro256** generator with its own uniform and normal transforms, so a
/// seed reproduces the same stream on any standard library.
///
/// Satisfies UniformRandomBitGenerator.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return next(); }
    result_type next() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1); safe as a log argument.
    double uniform_open() noexcept {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer on [0, bound), bound >= 1 (rejection sampling).
    std::uint64_t below(std::uint64_t bound) noexcept;

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Standard normal via the Marsaglia polar method (second variate cached).
    double normal() noexcept;

private:
    std::array<std::uint64_t, 4> s_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// Stream for one simulation run.
///
/// key = mix(mix(master_seed) ^ run_id); the generator state is the first
/// four SplitMix64 outputs from key. For a fixed master seed distinct run ids
/// give distinct keys.
Rng stream_for_run(std::uint64_t master_seed, std::uint64_t run_id) noexcept;

}  // namespace mpts

#ifndef CLUSTERDIAG_RNG_HPP
#define CLUSTERDIAG_RNG_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "clusterdiag/matrix.hpp"

/**
 * @file rng.hpp
 * @brief Seedable pseudorandom streams and the sampling primitives built on them.
 *
 * Every random decision in the library draws from an `RngStream`. A stream is identified by
 * `(master_seed, stream_index)`; its xoshiro256** state is the SplitMix64 expansion of
 * `mix64(master_seed, stream_index)`. Independent sub-tasks (restarts, stability runs, k values)
 * get their own stream through `child()`, never by jumping or sharing a parent sequence, so
 * results do not depend on how work is scheduled across threads.
 *
 * All constants are pinned below; changing any of them changes every published sequence.
 */

namespace clusterdiag {

namespace rng_constants {
inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;
inline constexpr std::uint64_t mix_mul1 = 0xbf58476d1ce4e5b9ULL;
inline constexpr std::uint64_t mix_mul2 = 0x94d049bb133111ebULL;
inline constexpr std::uint64_t stream_salt = 0x6a09e667f3bcc909ULL;
}

/// SplitMix64 output finalizer.
constexpr std::uint64_t splitmix_finalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * rng_constants::mix_mul1;
    z = (z ^ (z >> 27)) * rng_constants::mix_mul2;
    return z ^ (z >> 31);
}

/// Pinned hash of a (seed, index) pair, used for stream derivation.
constexpr std::uint64_t mix64(std::uint64_t seed, std::uint64_t index) noexcept {
    const std::uint64_t h = splitmix_finalize(seed + rng_constants::golden_gamma);
    return splitmix_finalize(h ^ (rng_constants::stream_salt + index * rng_constants::golden_gamma));
}

class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept;

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_index() const noexcept { return stream_index_; }

    /**
     * Independent stream for sub-task `index`. The child's master seed is this stream's key,
     * so children of different parents never collide and the parent's state is not consumed.
     */
    RngStream child(std::uint64_t index) const noexcept;

    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept;

    /// Uniform integer in [0, n). `n` must be positive.
    std::size_t uniform_index(std::size_t n) noexcept;

    /// N(0, 1) by the Marsaglia polar method; the second variate of each pair is cached.
    double standard_normal() noexcept;

    /**
     * Index drawn with probability proportional to `weights[i]`, scanning in index order.
     * Returns `weights.size()` if all weights are zero.
     */
    std::size_t weighted_index(std::span<const double> weights) noexcept;

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::uint64_t key_;
    std::array<std::uint64_t, 4> state_{};
    std::optional<double> spare_normal_;
};

/**
 * `mean + chol_lower * z` for a fresh vector `z` of standard normals (drawn in coordinate order).
 * Throws `InvalidArgument` when `chol_lower` is not `d x d` for `d = mean.size()`.
 */
std::vector<double> mvn_sample(std::span<const double> mean, const Matrix& chol_lower, RngStream& stream);

}

#endif

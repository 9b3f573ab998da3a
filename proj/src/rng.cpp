#include "clusterdiag/rng.hpp"

#include <bit>
#include <cmath>

#include "clusterdiag/error.hpp"

namespace clusterdiag {

namespace {

std::uint64_t splitmix_next(std::uint64_t& state) noexcept {
    state += rng_constants::golden_gamma;
    return splitmix_finalize(state);
}

}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
    : master_seed_(master_seed), stream_index_(stream_index), key_(mix64(master_seed, stream_index)) {
    std::uint64_t sm = key_;
    for (auto& word : state_) {
        word = splitmix_next(sm);
    }
    // xoshiro must not start from the all-zero state.
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
        state_[0] = rng_constants::golden_gamma;
    }
}

RngStream RngStream::child(std::uint64_t index) const noexcept {
    return RngStream(key_, index);
}

// xoshiro256** (Blackman & Vigna), period 2^256 - 1.
std::uint64_t RngStream::next_u64() noexcept {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
}

double RngStream::uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t RngStream::uniform_index(std::size_t n) noexcept {
    const auto pick = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return pick < n ? pick : n - 1;
}

double RngStream::standard_normal() noexcept {
    if (spare_normal_) {
        const double out = *spare_normal_;
        spare_normal_.reset();
        return out;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * factor;
    return u * factor;
}

std::size_t RngStream::weighted_index(std::span<const double> weights) noexcept {
    double total = 0.0;
    for (double w : weights) {
        total += w;
    }
    if (!(total > 0.0)) {
        return weights.size();
    }
    const double target = uniform01() * total;
    double running = 0.0;
    std::size_t last_positive = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) {
            continue;
        }
        running += weights[i];
        last_positive = i;
        if (target < running) {
            return i;
        }
    }
    // Rounding can leave target == running at the end of the scan.
    return last_positive;
}

std::vector<double> mvn_sample(std::span<const double> mean, const Matrix& chol_lower, RngStream& stream) {
    const std::size_t d = mean.size();
    if (chol_lower.rows() != d || chol_lower.cols() != d) {
        throw InvalidArgument("mvn_sample: mean has " + std::to_string(d) + " entries but factor is " +
                              std::to_string(chol_lower.rows()) + "x" + std::to_string(chol_lower.cols()));
    }
    std::vector<double> z(d);
    for (auto& v : z) {
        v = stream.standard_normal();
    }
    std::vector<double> out(mean.begin(), mean.end());
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            out[i] += chol_lower(i, j) * z[j];
        }
    }
    return out;
}

}

// Counter-based random stream. Every draw is a pure function of
// (seed, stream, counter), so sampling is reproducible bit-for-bit for any
// parallel schedule and any worker count.
#pragma once

#include <cstdint>
#include <span>

namespace cqr {

namespace detail {
// SplitMix64 finalizer; bijective 64-bit mixer with full avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

// One 64-bit word of the stream identified by (seed, stream) at position
// counter. Chained mixing of the three words.
inline std::uint64_t counter_word(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
    constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    std::uint64_t h = detail::mix64(seed + kGamma);
    h = detail::mix64(h ^ (stream + kGamma));
    return detail::mix64(h ^ (counter + kGamma));
}

// Uniform double in [0, 1) from the top 53 bits.
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) {
    return static_cast<double>(counter_word(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// Inverse-CDF draw of an index from the probability vector `weights`.
inline int counter_categorical(std::span<const double> weights, std::uint64_t seed,
                               std::uint64_t stream, std::uint64_t counter) {
    const double u = counter_uniform(seed, stream, counter);
    double cum = 0.0;
    const int n = static_cast<int>(weights.size());
    for (int i = 0; i < n; ++i) {
        cum += weights[static_cast<std::size_t>(i)];
        if (u < cum) return i;
    }
    return n - 1;
}

}  // namespace cqr

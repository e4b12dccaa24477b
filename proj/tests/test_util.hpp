// Shared helpers for the unit suites: seeded random channels, priors, and
// Hermitian matrices built on the counter RNG so runs are reproducible.
#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "cqr/channel.hpp"
#include "cqr/rng.hpp"

namespace test_util {

inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return cqr::counter_uniform(seed, stream, counter);
}

// Standard normal via Box-Muller on two counter draws.
inline double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const double u1 = cqr::counter_uniform(seed, stream, 2 * counter);
    const double u2 = cqr::counter_uniform(seed, stream, 2 * counter + 1);
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

inline cqr::Matrix random_unit_states(int dim, int count, std::uint64_t seed,
                                      bool complex_entries = true) {
    cqr::Matrix m(dim, count);
    std::uint64_t c = 0;
    for (int j = 0; j < count; ++j) {
        for (int i = 0; i < dim; ++i) {
            const double re = gaussian(seed, 1, c++);
            const double im = complex_entries ? gaussian(seed, 1, c++) : 0.0;
            m(i, j) = cqr::Complex(re, im);
        }
        m.col(j) /= m.col(j).norm();
    }
    return m;
}

inline cqr::ChannelSpec random_channel(int dim, int count, std::uint64_t seed,
                                       bool complex_entries = true) {
    return cqr::ChannelSpec::from_states(random_unit_states(dim, count, seed, complex_entries));
}

inline cqr::Prior random_prior(int count, std::uint64_t seed) {
    std::vector<double> w(static_cast<std::size_t>(count));
    double sum = 0.0;
    for (int i = 0; i < count; ++i) {
        w[static_cast<std::size_t>(i)] = -std::log(1.0 - uniform(seed, 2, static_cast<std::uint64_t>(i)));
        sum += w[static_cast<std::size_t>(i)];
    }
    for (double& v : w) v /= sum;
    return cqr::Prior{std::move(w)};
}

inline cqr::Matrix random_hermitian(int dim, std::uint64_t seed) {
    cqr::Matrix m(dim, dim);
    std::uint64_t c = 0;
    for (int i = 0; i < dim; ++i) {
        m(i, i) = cqr::Complex(2.0 * gaussian(seed, 3, c++), 0.0);
        for (int j = i + 1; j < dim; ++j) {
            const cqr::Complex z(gaussian(seed, 3, c++), gaussian(seed, 3, c++));
            m(i, j) = z;
            m(j, i) = std::conj(z);
        }
    }
    return m;
}

// Two-state channel with real overlap epsilon: (1, 0) and (eps, sqrt(1-eps^2)).
inline cqr::ChannelSpec binary_channel(double epsilon) {
    cqr::Matrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 0) = 0.0;
    m(0, 1) = epsilon;
    m(1, 1) = std::sqrt(1.0 - epsilon * epsilon);
    return cqr::ChannelSpec::from_states(std::move(m));
}

// k mutually orthogonal states in dimension k.
inline cqr::ChannelSpec orthogonal_channel(int k) {
    return cqr::ChannelSpec::from_states(cqr::Matrix::Identity(k, k));
}

// All letters mapped to the same state.
inline cqr::ChannelSpec identical_channel(int a) {
    cqr::Matrix m = cqr::Matrix::Zero(2, a);
    for (int i = 0; i < a; ++i) m(0, i) = 1.0;
    return cqr::ChannelSpec::from_states(std::move(m));
}

// Three states in the plane at angles {0, 1, 2} radians.
inline cqr::ChannelSpec three_letter_channel() {
    cqr::Matrix m(2, 3);
    const double angles[3] = {0.0, 1.0, 2.0};
    for (int i = 0; i < 3; ++i) {
        m(0, i) = std::cos(angles[i]);
        m(1, i) = std::sin(angles[i]);
    }
    return cqr::ChannelSpec::from_states(std::move(m));
}

}  // namespace test_util

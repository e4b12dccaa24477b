#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "cqr/exponents.hpp"
#include "cqr/optimize.hpp"
#include "test_util.hpp"

using cqr::Prior;
using cqr::Region;

namespace {

const double kLn2 = std::log(2.0);

// Frozen closed-form scalars for overlap 0.5 (see binary_* helpers; these are
// the same formulas evaluated in extended precision).
const double kMu1 = 0.47000362924573555;
const double kMuPrime1 = 0.3975433013185919;
const double kMutPrime1 = 0.19274475702175743;
const double kCapacity = 0.56233514461880835;

}  // namespace

TEST_CASE("mu: zero at s = 0, special cases") {
    const auto binary = test_util::binary_channel(0.5);
    const Prior half = cqr::uniform_prior(2);
    CHECK(cqr::mu(binary, half, 0.0) == 0.0);

    const auto orth = test_util::orthogonal_channel(2);
    CHECK(cqr::mu(orth, cqr::uniform_prior(2), 0.7) ==
          doctest::Approx(0.7 * kLn2).epsilon(1e-13));

    CHECK(cqr::mu(binary, half, 1.0) == doctest::Approx(kMu1).epsilon(1e-12));
}

TEST_CASE("mu: nondecreasing and concave on a grid") {
    const auto ch = test_util::random_channel(3, 4, 91);
    const Prior prior = test_util::random_prior(4, 92);
    const cqr::Spectrum sp = cqr::spectrum(ch, prior);
    double prev = -1.0;
    const double h = 0.05;
    for (int i = 0; i <= 40; ++i) {
        const double s = h * i;
        const double v = cqr::mu_from_spectrum(sp, s);
        CHECK(v >= prev - 1e-12);
        prev = v;
        if (i >= 1 && i <= 39) {
            const double second = cqr::mu_from_spectrum(sp, s - h) - 2.0 * v +
                                  cqr::mu_from_spectrum(sp, s + h);
            CHECK(second <= 1e-9);
        }
    }
}

TEST_CASE("mu_derivatives: closed-form anchors") {
    const auto binary = test_util::binary_channel(0.5);
    const Prior half = cqr::uniform_prior(2);
    CHECK(cqr::mu_derivatives(binary, half, 0.0).first ==
          doctest::Approx(kCapacity).epsilon(1e-12));
    CHECK(cqr::mu_derivatives(binary, half, 1.0).first ==
          doctest::Approx(kMuPrime1).epsilon(1e-12));

    for (int k : {2, 3, 4}) {
        const auto orth = test_util::orthogonal_channel(k);
        for (double s : {0.0, 0.5, 1.0}) {
            const auto d = cqr::mu_derivatives(orth, cqr::uniform_prior(k), s);
            CHECK(d.first == doctest::Approx(std::log(k)).epsilon(1e-12));
            CHECK(d.second == doctest::Approx(0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("mu_derivatives: match central finite differences") {
    for (std::uint64_t seed : {61u, 62u, 63u}) {
        const auto ch = test_util::random_channel(3, 3, seed);
        const Prior prior = test_util::random_prior(3, seed + 7);
        const cqr::Spectrum sp = cqr::spectrum(ch, prior);
        const double h = 1e-5;
        for (double s : {0.1, 0.4, 0.8, 1.0, 1.7}) {
            const double fd = (cqr::mu_from_spectrum(sp, s + h) -
                               cqr::mu_from_spectrum(sp, s - h)) /
                              (2.0 * h);
            const auto d = cqr::mu_derivatives_from_spectrum(sp, s);
            CHECK(std::abs(d.first - fd) <= 1e-6);
            CHECK(d.second <= 0.0);
        }
        // mu'(0) equals the entropy of the spectrum.
        CHECK(std::abs(cqr::mu_derivatives_from_spectrum(sp, 0.0).first - cqr::entropy(sp)) <=
              1e-10);
    }
}

TEST_CASE("mu_tilde: anchors and agreement with mu at s = 1") {
    const auto binary = test_util::binary_channel(0.5);
    const Prior half = cqr::uniform_prior(2);
    CHECK(cqr::mu_tilde(binary, half, 2.0) ==
          doctest::Approx(-2.0 * std::log(0.75)).epsilon(1e-13));
    CHECK(cqr::mu_tilde(test_util::orthogonal_channel(2), cqr::uniform_prior(2), 1.0) ==
          doctest::Approx(kLn2).epsilon(1e-13));

    for (std::uint64_t seed : {71u, 72u, 73u, 74u}) {
        const auto ch = test_util::random_channel(3, 3, seed);
        const Prior prior = test_util::random_prior(3, seed + 5);
        CHECK(std::abs(cqr::mu_tilde(ch, prior, 1.0) - cqr::mu(ch, prior, 1.0)) <= 1e-12);
    }
}

TEST_CASE("mu_tilde: concave increasing in s; derivative matches differences") {
    const auto ch = test_util::random_channel(3, 3, 81);
    const Prior prior = test_util::random_prior(3, 82);
    double prev = -1.0;
    for (int i = 0; i <= 30; ++i) {
        const double s = 1.0 + 0.25 * i;
        const double v = cqr::mu_tilde(ch, prior, s);
        CHECK(v >= prev - 1e-12);
        prev = v;
        if (i >= 1 && i <= 29) {
            const double second = cqr::mu_tilde(ch, prior, s - 0.25) - 2.0 * v +
                                  cqr::mu_tilde(ch, prior, s + 0.25);
            CHECK(second <= 1e-9);
        }
        const double h = 1e-5;
        if (s - h >= 1.0) {
            const double fd =
                (cqr::mu_tilde(ch, prior, s + h) - cqr::mu_tilde(ch, prior, s - h)) / (2.0 * h);
            CHECK(std::abs(cqr::mu_tilde_prime(ch, prior, s) - fd) <= 1e-6);
        }
    }
}

TEST_CASE("mu_tilde_inf: finite, infinite, and degenerate cases") {
    CHECK(cqr::mu_tilde_inf(test_util::binary_channel(0.5), cqr::uniform_prior(2)) ==
          doctest::Approx(-std::log(0.5)).epsilon(1e-13));
    CHECK(std::isinf(
        cqr::mu_tilde_inf(test_util::orthogonal_channel(2), cqr::uniform_prior(2))));
    CHECK(cqr::mu_tilde_inf(test_util::identical_channel(3), test_util::random_prior(3, 5)) ==
          doctest::Approx(0.0));
    // Zero prior weight silences the orthogonal pair.
    CHECK(cqr::mu_tilde_inf(test_util::orthogonal_channel(2), Prior{{1.0, 0.0}}) ==
          doctest::Approx(0.0));
}

TEST_CASE("random_coding_rhs and expurgated_rhs: direct evaluations") {
    const auto binary = test_util::binary_channel(0.5);
    const Prior half = cqr::uniform_prior(2);
    CHECK(cqr::random_coding_rhs(binary, half, 1, 3, 1.0) == 0.0);
    CHECK(cqr::random_coding_rhs(binary, half, 2, 3, 1.0) ==
          doctest::Approx(0.48828125).epsilon(1e-13));
    CHECK(cqr::random_coding_rhs(test_util::orthogonal_channel(2), cqr::uniform_prior(2), 2,
                                 4, 1.0) == doctest::Approx(0.125).epsilon(1e-13));

    CHECK(cqr::expurgated_rhs(binary, half, 1, 3, 1.0) == 0.0);
    CHECK(cqr::expurgated_rhs(binary, half, 2, 3, 1.0) ==
          doctest::Approx(0.9765625).epsilon(1e-13));
    CHECK(cqr::expurgated_rhs(test_util::orthogonal_channel(2), cqr::uniform_prior(2), 2, 2,
                              1.0) == doctest::Approx(1.0).epsilon(1e-13));

    // Monotone in M.
    double prev = 0.0;
    for (int m : {2, 3, 5, 9, 17}) {
        const double v = cqr::random_coding_rhs(binary, half, m, 4, 0.7);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("e_r_at: branch structure for the binary channel") {
    const auto binary = test_util::binary_channel(0.5);
    const Prior half = cqr::uniform_prior(2);

    const auto at0 = cqr::e_r_at(binary, half, 0.0);
    CHECK(at0.value == doctest::Approx(kMu1).epsilon(1e-12));
    CHECK(at0.s_star == 1.0);
    CHECK(at0.region == Region::RLinear);

    const auto at_capacity = cqr::e_r_at(binary, half, kCapacity);
    CHECK(at_capacity.value <= 1e-9);

    // Both branch formulas at the knee.
    const auto knee = cqr::e_r_at(binary, half, kMuPrime1);
    CHECK(knee.value == doctest::Approx(kMu1 - kMuPrime1).epsilon(1e-10));
    const auto left = cqr::e_r_at(binary, half, kMuPrime1 - 1e-9);
    const auto right = cqr::e_r_at(binary, half, kMuPrime1 + 1e-9);
    CHECK(left.region == Region::RLinear);
    CHECK(right.region == Region::RCurved);
    CHECK(std::abs(left.value - right.value) <= 1e-8);
}

TEST_CASE("e_r_at: agrees with direct concave maximization") {
    const auto ch = test_util::random_channel(3, 3, 101);
    const Prior prior = test_util::random_prior(3, 102);
    const cqr::Spectrum sp = cqr::spectrum(ch, prior);
    const double h = cqr::entropy(sp);
    for (double f : {0.05, 0.3, 0.6, 0.9}) {
        const double rate = f * h;
        const auto direct = cqr::maximize_concave_1d(
            [&](double s) { return cqr::mu_from_spectrum(sp, s) - s * rate; }, 0.0, 1.0,
            1e-12);
        const auto fast = cqr::e_r_at(ch, prior, rate);
        CHECK(fast.value == doctest::Approx(direct.value).epsilon(1e-8));
    }
}

TEST_CASE("e_ex_at: branch structure for the binary channel") {
    const auto binary = test_util::binary_channel(0.5);
    const Prior half = cqr::uniform_prior(2);

    const auto zero = cqr::e_ex_at(binary, half, kMu1 + 0.1);
    CHECK(zero.value == 0.0);
    CHECK(zero.region == Region::ExZero);

    const auto knee = cqr::e_ex_at(binary, half, kMutPrime1);
    CHECK(knee.value == doctest::Approx(kMu1 - kMutPrime1).epsilon(1e-10));
    const auto left = cqr::e_ex_at(binary, half, kMutPrime1 - 1e-9);
    const auto right = cqr::e_ex_at(binary, half, kMutPrime1 + 1e-9);
    CHECK(left.region == Region::ExCurved);
    CHECK(right.region == Region::ExLinear);
    CHECK(std::abs(left.value - right.value) <= 1e-8);

    // At mut1 the linear branch meets zero.
    const auto at_mut1 = cqr::e_ex_at(binary, half, kMu1);
    CHECK(at_mut1.value <= 1e-10);
}

TEST_CASE("e_ex_at: agrees with direct concave maximization on the curved branch") {
    const auto binary = test_util::binary_channel(0.5);
    const Prior half = cqr::uniform_prior(2);
    for (double rate : {0.02, 0.05, 0.1, 0.15}) {
        const auto direct = cqr::maximize_concave_1d(
            [&](double s) { return cqr::mu_tilde(binary, half, s) - s * rate; }, 1.0, 60.0,
            1e-12);
        const auto fast = cqr::e_ex_at(binary, half, rate);
        CHECK(fast.value == doctest::Approx(direct.value).epsilon(1e-8));
    }
}

TEST_CASE("e_ex_at: below-resolution behavior") {
    const auto binary = test_util::binary_channel(0.5);
    const Prior half = cqr::uniform_prior(2);
    // mu_tilde'(200) ~ 6e-6 for this channel; a far smaller rate cannot be
    // bracketed and the finite limit turns it into an error.
    CHECK_THROWS_AS(cqr::e_ex_at(binary, half, 1e-9), cqr::UnboundedParameter);

    // With an orthogonal pair the limit is infinite and is reported.
    const auto inf_point =
        cqr::e_ex_at(test_util::orthogonal_channel(2), cqr::uniform_prior(2), 0.1);
    CHECK(std::isinf(inf_point.value));
    CHECK(inf_point.below_resolution);
}

TEST_CASE("capacity: orthogonal, binary, and degenerate channels") {
    for (int k : {2, 3, 4}) {
        const auto r = cqr::capacity(test_util::orthogonal_channel(k));
        CHECK(std::abs(r.value - std::log(k)) <= 1e-6);
    }
    const auto binary = cqr::capacity(test_util::binary_channel(0.5));
    CHECK(std::abs(binary.value - kCapacity) <= 1e-6);
    CHECK(binary.argmax[0] == doctest::Approx(0.5).epsilon(1e-3));

    CHECK(cqr::capacity(test_util::identical_channel(3)).value <= 1e-9);
}

TEST_CASE("e_r_envelope: binary optimum sits at the uniform prior") {
    const auto binary = test_util::binary_channel(0.5);
    const Prior half = cqr::uniform_prior(2);
    for (double rate : {0.1, 0.25, 0.4}) {
        const double env = cqr::e_r_envelope_value(binary, rate);
        const double fixed = cqr::e_r_at(binary, half, rate).value;
        CHECK(env == doctest::Approx(fixed).epsilon(1e-7));
    }
    CHECK(cqr::e_r_envelope_value(binary, kCapacity + 0.05) == 0.0);

    // mu = s ln k makes the bracket linear in s: envelope is ln k - R at s = 1.
    for (int k : {2, 3}) {
        const double rate = 0.25 * std::log(k);
        const double env = cqr::e_r_envelope_value(test_util::orthogonal_channel(k), rate);
        CHECK(std::abs(env - (std::log(k) - rate)) <= 1e-6);
    }
}

TEST_CASE("zero_rate_exponent: binary, orthogonal, identical") {
    const auto binary = cqr::zero_rate_exponent(test_util::binary_channel(0.5));
    CHECK(std::abs(binary.value - kLn2) <= 1e-6);
    REQUIRE(binary.argmin.has_value());
    CHECK((*binary.argmin)[0] == doctest::Approx(0.5).epsilon(1e-3));

    const auto orth = cqr::zero_rate_exponent(test_util::orthogonal_channel(3));
    CHECK(std::isinf(orth.value));
    REQUIRE(orth.orthogonal_witness.has_value());

    CHECK(cqr::zero_rate_exponent(test_util::identical_channel(2)).value ==
          doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("zero_rate_exponent: consistent with the prior-maximized limit") {
    for (double eps : {0.3, 0.6}) {
        const auto ch = test_util::binary_channel(eps);
        const auto direct = cqr::zero_rate_exponent(ch);
        const auto via_limit = cqr::optimize_simplex(
            [&](const std::vector<double>& pi) { return cqr::mu_tilde_inf(ch, Prior{pi}); },
            2, cqr::OptMode::Maximize);
        CHECK(direct.value == doctest::Approx(via_limit.value).epsilon(1e-6));
    }
}

TEST_CASE("region_report: binary scalars and ordering") {
    const auto report =
        cqr::region_report(test_util::binary_channel(0.5), cqr::uniform_prior(2));
    CHECK(report.mu1 == doctest::Approx(kMu1).epsilon(1e-12));
    CHECK(report.mu_prime1 == doctest::Approx(kMuPrime1).epsilon(1e-12));
    CHECK(report.mut_prime1 == doctest::Approx(kMutPrime1).epsilon(1e-12));
    CHECK(report.mut1 == doctest::Approx(kMu1).epsilon(1e-12));
    CHECK(report.capacity_at_prior == doctest::Approx(kCapacity).epsilon(1e-12));
    CHECK(report.ordering == cqr::RegionReport::Ordering::Generic);
    CHECK(std::abs(report.mut1 - report.mu1) <= 1e-10);
}

TEST_CASE("region_report: orthogonal pair convention and identical states") {
    const auto orth = cqr::region_report(test_util::orthogonal_channel(2), cqr::uniform_prior(2));
    CHECK(orth.mut_prime1 == doctest::Approx(kLn2).epsilon(1e-12));
    CHECK(orth.mut1 == doctest::Approx(kLn2).epsilon(1e-12));
    CHECK(orth.ordering == cqr::RegionReport::Ordering::Generic);

    const auto flat = cqr::region_report(test_util::identical_channel(2), cqr::uniform_prior(2));
    CHECK(flat.mu1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(flat.mu_prime1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(flat.mut_prime1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(flat.mut1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(flat.capacity_at_prior == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("binary_report: closed forms, limits, and the eigenvalue grid") {
    const auto report = cqr::binary_report(0.5);
    CHECK(report.mu1 == doctest::Approx(kMu1).epsilon(1e-14));
    CHECK(report.mut_prime1 == doctest::Approx(kMutPrime1).epsilon(1e-14));
    CHECK(report.mu_prime1 == doctest::Approx(kMuPrime1).epsilon(1e-14));
    CHECK(report.capacity == doctest::Approx(kCapacity).epsilon(1e-14));
    CHECK(report.zero_rate == doctest::Approx(kLn2).epsilon(1e-14));

    CHECK(cqr::binary_report(0.9).capacity < cqr::binary_report(0.5).capacity);
    CHECK(cqr::binary_report(0.999).capacity < 1e-2);
    CHECK(cqr::binary_report(0.999).zero_rate < 2e-3);

    const auto grid = cqr::binary_report(0.6);
    const std::size_t mid = 50;  // pi = 0.5 on the default 101-point grid
    CHECK(grid.pi_grid[mid] == doctest::Approx(0.5));
    CHECK(grid.lambda1[mid] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(grid.lambda2[mid] == doctest::Approx(0.8).epsilon(1e-14));

    CHECK_THROWS_AS(cqr::binary_report(0.0), cqr::DomainError);
    CHECK_THROWS_AS(cqr::binary_report(1.0), cqr::DomainError);
}

TEST_CASE("binary_report: matches the generic eigendecomposition path") {
    for (double eps : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const auto closed = cqr::binary_report(eps);
        const auto ch = test_util::binary_channel(eps);
        const Prior half = cqr::uniform_prior(2);
        const auto generic = cqr::region_report(ch, half);
        CHECK(std::abs(closed.mu1 - generic.mu1) <= 1e-10);
        CHECK(std::abs(closed.mu_prime1 - generic.mu_prime1) <= 1e-10);
        CHECK(std::abs(closed.mut_prime1 - generic.mut_prime1) <= 1e-10);
        CHECK(std::abs(closed.capacity - generic.capacity_at_prior) <= 1e-10);
        CHECK(std::abs(closed.zero_rate - cqr::mu_tilde_inf(ch, half)) <= 1e-10);
        // Eigenvalue grid vs the generic spectrum at matching priors.
        for (std::size_t i : {10u, 25u, 50u, 75u}) {
            const double pi1 = closed.pi_grid[i];
            const auto sp = cqr::spectrum(ch, Prior{{1.0 - pi1, pi1}});
            CHECK(std::abs(closed.lambda1[i] - sp.eigenvalues[0]) <= 1e-10);
            CHECK(std::abs(closed.lambda2[i] - sp.eigenvalues[1]) <= 1e-10);
        }
    }
}

TEST_CASE("curve: region structure, monotonicity, convexity") {
    const auto binary = test_util::binary_channel(0.5);
    const Prior half = cqr::uniform_prior(2);
    const auto curve = cqr::curve(binary, half, 0.01, 0.56, 111);

    double prev_rate = -1.0;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const auto& p = curve.points[i];
        CHECK(p.rate > prev_rate);
        prev_rate = p.rate;
        if (i > 0) {
            CHECK(p.e_r <= curve.points[i - 1].e_r + 1e-12);
            CHECK(p.e_ex <= curve.points[i - 1].e_ex + 1e-12);
        }
        if (i > 0 && i + 1 < curve.points.size()) {
            const double second_r =
                curve.points[i - 1].e_r - 2.0 * p.e_r + curve.points[i + 1].e_r;
            const double second_ex =
                curve.points[i - 1].e_ex - 2.0 * p.e_ex + curve.points[i + 1].e_ex;
            CHECK(second_r >= -1e-9);
            CHECK(second_ex >= -1e-9);
        }
        if (p.rate < 0.1927447) {
            CHECK(p.e_ex > p.e_r);
            CHECK(p.region == Region::ExCurved);
        } else if (p.rate >= 0.1927447 && p.rate <= 0.3975433) {
            CHECK(std::abs(p.e_ex - p.e_r) <= 1e-9);
        } else if (p.rate > 0.3975433 && p.rate < kCapacity) {
            CHECK(p.e_r > p.e_ex);
        }
    }

    // Grid beyond capacity: both exponents vanish.
    const auto tail = cqr::curve(binary, half, kCapacity + 0.01, kCapacity + 0.2, 5);
    for (const auto& p : tail.points) {
        CHECK(p.e_r == 0.0);
        CHECK(p.e_ex == 0.0);
    }

    const auto two = cqr::curve(binary, half, 0.1, 0.2, 2);
    CHECK(two.points.size() == 2);
}

TEST_CASE("curve_envelope: binary envelope matches the symmetric prior") {
    const auto binary = test_util::binary_channel(0.5);
    const Prior half = cqr::uniform_prior(2);
    const auto env = cqr::curve_envelope(binary, 0.1, 0.5, 5);
    for (const auto& p : env.points) {
        CHECK(p.e_r == doctest::Approx(cqr::e_r_at(binary, half, p.rate).value).epsilon(1e-6));
        CHECK(p.e_ex ==
              doctest::Approx(cqr::e_ex_at(binary, half, p.rate).value).epsilon(1e-6));
    }
}

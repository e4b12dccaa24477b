#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cqr/channel.hpp"
#include "test_util.hpp"

using cqr::ChannelSpec;
using cqr::Matrix;
using cqr::Prior;

TEST_CASE("load_channel: orthogonal basis pair") {
    const auto ch = cqr::load_channel(R"({
      "format": "states",
      "states": {"dim": 2, "vectors": [
        {"re": [1, 0], "im": [0, 0]},
        {"re": [0, 1], "im": [0, 0]}
      ]}
    })");
    CHECK(ch.alphabet_size() == 2);
    CHECK(ch.has_states());
    CHECK(std::abs(ch.gram()(0, 1)) < 1e-15);
    CHECK(ch.gram()(0, 0).real() == doctest::Approx(1.0));
}

TEST_CASE("load_channel: explicit overlap 0.5") {
    const double eps = 0.5;
    const auto ch = cqr::load_channel(R"({
      "format": "states",
      "states": {"dim": 2, "vectors": [
        {"re": [1, 0]},
        {"re": [0.5, 0.86602540378443865]}
      ]}
    })");
    CHECK(ch.gram()(0, 1).real() == doctest::Approx(eps).epsilon(1e-12));
}

TEST_CASE("load_channel: gram-only document") {
    const auto ch = cqr::load_channel(R"({
      "format": "gram",
      "gram": {"re": [[1, 0.5], [0.5, 1]]},
      "prior": [0.25, 0.75]
    })");
    CHECK(ch.alphabet_size() == 2);
    CHECK_FALSE(ch.has_states());
    CHECK(ch.gram()(1, 0).real() == doctest::Approx(0.5));
    REQUIRE(ch.file_prior().has_value());
    CHECK(ch.file_prior()->weights[1] == doctest::Approx(0.75));
    CHECK_THROWS_AS(ch.states(), cqr::RepresentationUnavailable);
}

TEST_CASE("load_channel: error paths") {
    CHECK_THROWS_AS(cqr::load_channel("not json"), cqr::ParseError);
    CHECK_THROWS_AS(cqr::load_channel(R"({"format": "bogus"})"), cqr::ParseError);
    // Non-unit state vector.
    CHECK_THROWS_AS(cqr::load_channel(R"({
      "format": "states",
      "states": {"dim": 2, "vectors": [{"re": [1, 1]}]}
    })"),
                    cqr::ValidationError);
    // Gram with overlap magnitude above 1.
    CHECK_THROWS_AS(cqr::load_channel(R"({
      "format": "gram",
      "gram": {"re": [[1, 1.5], [1.5, 1]]}
    })"),
                    cqr::ValidationError);
    // Prior that does not sum to 1.
    CHECK_THROWS_AS(cqr::load_channel(R"({
      "format": "gram",
      "gram": {"re": [[1, 0.5], [0.5, 1]]},
      "prior": [0.5, 0.6]
    })"),
                    cqr::ValidationError);
}

TEST_CASE("average_state: orthogonal pair, uniform prior") {
    const auto ch = test_util::orthogonal_channel(2);
    const Matrix avg = cqr::average_state(ch, cqr::uniform_prior(2));
    CHECK(avg(0, 0).real() == doctest::Approx(0.5));
    CHECK(avg(1, 1).real() == doctest::Approx(0.5));
    CHECK(std::abs(avg(0, 1)) < 1e-15);
    CHECK(avg.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("average_state: single-letter prior gives a rank-one projector") {
    const auto ch = test_util::binary_channel(0.5);
    const Matrix avg = cqr::average_state(ch, Prior{{1.0, 0.0}});
    const auto es = cqr::eig_hermitian(avg);
    CHECK(es.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(es.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("average_state: binary channel closed-form eigenvalues") {
    const auto ch = test_util::binary_channel(0.6);
    const Matrix avg = cqr::average_state(ch, cqr::uniform_prior(2));
    const auto es = cqr::eig_hermitian(avg);
    CHECK(es.eigenvalues(0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(es.eigenvalues(1) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK_THROWS_AS(
        cqr::average_state(cqr::ChannelSpec::from_gram(ch.gram()), cqr::uniform_prior(2)),
        cqr::RepresentationUnavailable);
}

TEST_CASE("spectrum: trivial and closed-form cases") {
    const auto sp_orth = cqr::spectrum(test_util::orthogonal_channel(2), cqr::uniform_prior(2));
    CHECK(sp_orth.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sp_orth.eigenvalues[1] == doctest::Approx(0.5).epsilon(1e-12));

    const auto sp5 = cqr::spectrum(test_util::binary_channel(0.5), cqr::uniform_prior(2));
    CHECK(sp5.eigenvalues[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(sp5.eigenvalues[1] == doctest::Approx(0.75).epsilon(1e-12));

    const auto sp6 = cqr::spectrum(test_util::binary_channel(0.6), cqr::uniform_prior(2));
    CHECK(sp6.eigenvalues[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(sp6.eigenvalues[1] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("spectrum: operator path and weighted-Gram path coincide") {
    for (std::uint64_t seed : {41u, 42u, 43u, 44u}) {
        const int dim = 3, a = 4;
        const auto ch = test_util::random_channel(dim, a, seed);
        const auto prior = test_util::random_prior(a, seed + 100);
        auto op_path = cqr::spectrum(ch, prior).eigenvalues;
        auto gram_path = cqr::spectrum(ChannelSpec::from_gram(ch.gram()), prior).eigenvalues;

        // Compare nonzero tails: both are ascending, lengths dim vs a.
        std::sort(op_path.rbegin(), op_path.rend());
        std::sort(gram_path.rbegin(), gram_path.rend());
        for (std::size_t i = 0; i < std::min(op_path.size(), gram_path.size()); ++i) {
            CHECK(op_path[i] == doctest::Approx(gram_path[i]).epsilon(1e-10));
        }
        double op_sum = 0.0, gram_sum = 0.0;
        for (double v : op_path) op_sum += v;
        for (double v : gram_path) gram_sum += v;
        CHECK(op_sum == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(gram_sum == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("entropy: pure, uniform, and skewed spectra") {
    CHECK(cqr::entropy(cqr::Spectrum{{1.0, 0.0}}) == doctest::Approx(0.0));
    CHECK(cqr::entropy(cqr::Spectrum{{0.5, 0.5}}) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(cqr::entropy(cqr::Spectrum{{0.2, 0.8}}) ==
          doctest::Approx(0.50040242353818788).epsilon(1e-14));
}

TEST_CASE("entropy: concave in the prior") {
    const auto ch = test_util::random_channel(3, 3, 77);
    auto h_at = [&](const Prior& p) { return cqr::entropy(cqr::spectrum(ch, p)); };
    for (std::uint64_t seed : {51u, 52u, 53u}) {
        const Prior p1 = test_util::random_prior(3, seed);
        const Prior p2 = test_util::random_prior(3, seed + 10);
        for (double t : {0.25, 0.5, 0.75}) {
            Prior mixed{{0, 0, 0}};
            for (int i = 0; i < 3; ++i) {
                mixed.weights[static_cast<std::size_t>(i)] = t * p1[i] + (1.0 - t) * p2[i];
            }
            CHECK(h_at(mixed) >= t * h_at(p1) + (1.0 - t) * h_at(p2) - 1e-9);
        }
    }
}

TEST_CASE("prior validation") {
    CHECK_THROWS_AS(cqr::validate_prior(Prior{{0.5, 0.6}}, 2), cqr::ValidationError);
    CHECK_THROWS_AS(cqr::validate_prior(Prior{{-0.1, 1.1}}, 2), cqr::ValidationError);
    CHECK_THROWS_AS(cqr::validate_prior(Prior{{1.0}}, 2), cqr::ValidationError);
    CHECK_NOTHROW(cqr::validate_prior(Prior{{0.3, 0.7}}, 2));
}

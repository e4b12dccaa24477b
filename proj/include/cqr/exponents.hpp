// Analytic exponent functions of a pure-state channel: the Renyi-type
// function mu(pi, s) and its derivatives, the pairwise-overlap function
// mu_tilde(pi, s), the random-coding and expurgated exponents with their
// region structure, capacity, the zero-rate exponent, and closed forms for
// the binary channel. All rates and exponents are in nats.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cqr/channel.hpp"

namespace cqr {

// Cap for the s-search when inverting the derivative of mu_tilde. Below the
// rate this resolves, the zero-rate limit takes over.
inline constexpr double kSCap = 200.0;

enum class Region { RLinear, RCurved, ExCurved, ExLinear, ExZero };
const char* region_name(Region region);

struct ExponentPoint {
    double value = 0.0;   // may be +infinity (expurgated bound only)
    double s_star = 0.0;  // maximizing parameter; +infinity in the limit case
    Region region = Region::RCurved;
    // Set when the rate fell below the resolution of the capped s-search and
    // the zero-rate limit was reported instead.
    bool below_resolution = false;
};

// mu(pi, s) = -ln sum_j lambda_j^{1+s}; zero at s = 0 by construction.
double mu(const ChannelSpec& channel, const Prior& prior, double s);
double mu_from_spectrum(const Spectrum& sp, double s);

struct MuDerivatives {
    double first = 0.0;
    double second = 0.0;  // <= 0; mu is concave in s
};
MuDerivatives mu_derivatives(const ChannelSpec& channel, const Prior& prior, double s);
MuDerivatives mu_derivatives_from_spectrum(const Spectrum& sp, double s);

// mu_tilde(pi, s) = -s ln sum_{i,k} pi_i pi_k |G_ik|^{2/s}, defined for s >= 1.
double mu_tilde(const ChannelSpec& channel, const Prior& prior, double s);
double mu_tilde_prime(const ChannelSpec& channel, const Prior& prior, double s);
// Limit s -> infinity: -sum pi_i pi_k ln |G_ik|^2, +infinity when a pair with
// positive prior weight is orthogonal. 0 ln 0 = 0 handles zero-weight pairs.
double mu_tilde_inf(const ChannelSpec& channel, const Prior& prior);

// Right-hand side of the random-coding bound: 2 (M-1)^s (sum lambda^{1+s})^n.
double random_coding_rhs(const ChannelSpec& channel, const Prior& prior, int M, int n,
                         double s);
// Right-hand side of the expurgated bound:
// (4 (M-1) [sum pi_i pi_k |G_ik|^{2/s}]^n)^s.
double expurgated_rhs(const ChannelSpec& channel, const Prior& prior, int M, int n, double s);

// Random-coding exponent at fixed prior, with branch information.
ExponentPoint e_r_at(const ChannelSpec& channel, const Prior& prior, double rate);
// Expurgated exponent at fixed prior. Throws UnboundedParameter when the rate
// is below the capped s-search resolution while the zero-rate limit is finite.
ExponentPoint e_ex_at(const ChannelSpec& channel, const Prior& prior, double rate);

struct CapacityResult {
    double value = 0.0;
    Prior argmax;
};
// max over priors of the entropy of the averaged state.
CapacityResult capacity(const ChannelSpec& channel);

// max over priors of the fixed-prior exponents; each bound is optimized
// independently. The returned point carries the branch data at the best prior.
ExponentPoint e_r_envelope(const ChannelSpec& channel, double rate);
ExponentPoint e_ex_envelope(const ChannelSpec& channel, double rate);
double e_r_envelope_value(const ChannelSpec& channel, double rate);

struct ZeroRateResult {
    double value = 0.0;  // +infinity when an orthogonal pair exists
    std::optional<Prior> argmin;
    // Letter pair witnessing orthogonality in the infinite case.
    std::optional<std::pair<int, int>> orthogonal_witness;
};
ZeroRateResult zero_rate_exponent(const ChannelSpec& channel);

// Five scalars controlling the branch layout at a fixed prior, plus the
// ordering tag. mut1 must match mu1; a gap flags an inconsistency upstream.
struct RegionReport {
    double mu1 = 0.0;
    double mu_prime1 = 0.0;
    double mut_prime1 = 0.0;
    double mut1 = 0.0;
    double capacity_at_prior = 0.0;  // mu'(pi, 0), the entropy at this prior
    enum class Ordering { Generic, NoLinearPiece } ordering = Ordering::Generic;
};
RegionReport region_report(const ChannelSpec& channel, const Prior& prior);

// Closed forms for the two-state channel with overlap magnitude epsilon,
// evaluated without any eigendecomposition. Serves as an independent oracle
// for the generic path.
struct BinaryReport {
    double epsilon = 0.0;
    std::vector<double> pi_grid, lambda1, lambda2;
    double mu1 = 0.0;
    double mut_prime1 = 0.0;
    double mu_prime1 = 0.0;
    double capacity = 0.0;
    double zero_rate = 0.0;
    std::vector<double> mu_s_grid, mu_samples;    // s in [0, 1]
    std::vector<double> mut_s_grid, mut_samples;  // s in [1, kSCap]
};
BinaryReport binary_report(double epsilon, int pi_points = 101, int s_points = 65);

// Closed-form scalar helpers for the binary channel.
double binary_mu(double epsilon, double s);
double binary_mu_tilde(double epsilon, double s);
double binary_mu1(double epsilon);
double binary_mu_prime1(double epsilon);
double binary_mut_prime1(double epsilon);
double binary_capacity(double epsilon);
double binary_zero_rate(double epsilon);
std::pair<double, double> binary_eigenvalues(double epsilon, double pi1);

struct CurvePoint {
    double rate = 0.0;
    double e_r = 0.0;
    double e_ex = 0.0;  // may be +infinity
    Region region = Region::RCurved;
};
struct ExponentCurve {
    std::vector<CurvePoint> points;
};

// Samples both exponents on a uniform rate grid. The region tag names the
// branch of the pointwise larger bound (ties go to the random-coding side).
ExponentCurve curve(const ChannelSpec& channel, const Prior& prior, double r_min,
                    double r_max, int points);
ExponentCurve curve_envelope(const ChannelSpec& channel, double r_min, double r_max,
                             int points);

}  // namespace cqr

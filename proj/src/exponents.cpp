#include "cqr/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "cqr/optimize.hpp"

namespace cqr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLambdaFloor = 1e-15;  // eigenvalues below this are dropped
constexpr double kRootValueTol = 1e-10;
constexpr double kRootWidthTol = 1e-12;

// Pairwise-overlap data for the mu_tilde family: weights pi_i pi_k and
// log-overlaps ln|G_ik| for pairs with positive weight.
struct PairTable {
    std::vector<double> weight;
    std::vector<double> log_overlap;  // ln|G_ik|, only finite entries stored
    double zero_pair_weight = 0.0;    // total weight on orthogonal pairs
    bool has_zero_pair = false;
};

PairTable make_pair_table(const ChannelSpec& channel, const Prior& prior) {
    validate_prior(prior, channel.alphabet_size());
    const Matrix& g = channel.gram();
    const int a = channel.alphabet_size();
    PairTable table;
    table.weight.reserve(static_cast<std::size_t>(a) * static_cast<std::size_t>(a));
    for (int i = 0; i < a; ++i) {
        for (int k = 0; k < a; ++k) {
            const double w = prior[i] * prior[k];
            if (w == 0.0) continue;  // zero-weight pairs never contribute
            const double mag = std::abs(g(i, k));
            if (mag == 0.0) {
                table.has_zero_pair = true;
                table.zero_pair_weight += w;
                continue;
            }
            table.weight.push_back(w);
            table.log_overlap.push_back(std::log(std::min(mag, 1.0)));
        }
    }
    return table;
}

// F(s) = sum w |G|^{2/s} and its log-overlap moment sum w |G|^{2/s} ln|G|.
struct PairSums {
    double f = 0.0;
    double f_log = 0.0;
};

PairSums pair_sums(const PairTable& table, double s) {
    PairSums sums;
    for (std::size_t p = 0; p < table.weight.size(); ++p) {
        const double term = table.weight[p] * std::exp((2.0 / s) * table.log_overlap[p]);
        sums.f += term;
        sums.f_log += term * table.log_overlap[p];
    }
    return sums;
}

double mu_tilde_from_pairs(const PairTable& table, double s) {
    return -s * std::log(pair_sums(table, s).f);
}

double mu_tilde_prime_from_pairs(const PairTable& table, double s) {
    const PairSums sums = pair_sums(table, s);
    // d/ds [-s ln F(s)] with F'(s) = -(2/s^2) sum w |G|^{2/s} ln|G|.
    return -std::log(sums.f) + (2.0 / s) * sums.f_log / sums.f;
}

double mu_tilde_inf_from_pairs(const PairTable& table) {
    if (table.has_zero_pair) return kInf;
    double total = 0.0;
    for (std::size_t p = 0; p < table.weight.size(); ++p) {
        total += table.weight[p] * 2.0 * table.log_overlap[p];
    }
    return -total;
}

// Root of decreasing(s) = target on [lo, hi]; requires a bracketing sign
// change, decreasing(lo) >= target >= decreasing(hi).
double bisect_decreasing(const std::function<double(double)>& decreasing, double target,
                         double lo, double hi) {
    double flo = decreasing(lo) - target;
    double fhi = decreasing(hi) - target;
    if (flo <= 0.0) return lo;
    if (fhi >= 0.0) return hi;
    while (hi - lo > kRootWidthTol) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = decreasing(mid) - target;
        if (std::abs(fmid) <= kRootValueTol) return mid;
        if (fmid > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

ExponentPoint e_r_from_spectrum(const Spectrum& sp, double rate) {
    const double mu1 = mu_from_spectrum(sp, 1.0);
    const double mu_prime1 = mu_derivatives_from_spectrum(sp, 1.0).first;
    const double h = mu_derivatives_from_spectrum(sp, 0.0).first;
    if (rate <= mu_prime1) {
        return ExponentPoint{mu1 - rate, 1.0, Region::RLinear};
    }
    if (rate >= h) {
        return ExponentPoint{0.0, 0.0, Region::RCurved};
    }
    auto deriv = [&sp](double s) { return mu_derivatives_from_spectrum(sp, s).first; };
    const double s_r = bisect_decreasing(deriv, rate, 0.0, 1.0);
    const double value = std::max(mu_from_spectrum(sp, s_r) - s_r * rate, 0.0);
    return ExponentPoint{value, s_r, Region::RCurved};
}

ExponentPoint e_ex_from_pairs(const PairTable& table, double rate) {
    if (!(rate > 0.0)) throw ValidationError("e_ex_at: rate must be positive");
    const double mut1 = mu_tilde_from_pairs(table, 1.0);
    const double mut_prime1 = mu_tilde_prime_from_pairs(table, 1.0);
    if (rate >= mut1) {
        return ExponentPoint{0.0, 1.0, Region::ExZero};
    }
    if (rate >= mut_prime1) {
        return ExponentPoint{mut1 - rate, 1.0, Region::ExLinear};
    }
    const double floor_rate = mu_tilde_prime_from_pairs(table, kSCap);
    if (rate < floor_rate) {
        const double limit = mu_tilde_inf_from_pairs(table);
        if (std::isinf(limit)) {
            ExponentPoint point{kInf, kInf, Region::ExCurved};
            point.below_resolution = true;
            return point;
        }
        throw UnboundedParameter(
            "e_ex_at: rate below the resolution of the capped s-search while the "
            "zero-rate limit is finite");
    }
    auto deriv = [&table](double s) { return mu_tilde_prime_from_pairs(table, s); };
    const double s_r = bisect_decreasing(deriv, rate, 1.0, kSCap);
    const double value = std::max(mu_tilde_from_pairs(table, s_r) - s_r * rate, 0.0);
    return ExponentPoint{value, s_r, Region::ExCurved};
}

Region combined_region(const ExponentPoint& er, const ExponentPoint& ex) {
    // Tag of the pointwise larger bound; ties go to the random-coding branch.
    // The two bounds ride different numeric routes, so the tie needs a window.
    const double tie = 1e-12 * std::max({1.0, er.value, std::isinf(ex.value) ? 0.0 : ex.value});
    if (ex.value > er.value + tie) return ex.region;
    return er.region;
}

}  // namespace

const char* region_name(Region region) {
    switch (region) {
        case Region::RLinear: return "r-linear";
        case Region::RCurved: return "r-curved";
        case Region::ExCurved: return "ex-curved";
        case Region::ExLinear: return "ex-linear";
        case Region::ExZero: return "ex-zero";
    }
    return "unknown";
}

double mu_from_spectrum(const Spectrum& sp, double s) {
    if (!(s >= 0.0)) throw ValidationError("mu: s must be >= 0");
    if (s == 0.0) return 0.0;
    double sum = 0.0;
    for (double lambda : sp.eigenvalues) {
        if (lambda > kLambdaFloor) sum += std::pow(lambda, 1.0 + s);
    }
    return -std::log(sum);
}

double mu(const ChannelSpec& channel, const Prior& prior, double s) {
    return mu_from_spectrum(spectrum(channel, prior), s);
}

MuDerivatives mu_derivatives_from_spectrum(const Spectrum& sp, double s) {
    if (!(s >= 0.0)) throw ValidationError("mu_derivatives: s must be >= 0");
    double a = 0.0, b = 0.0, c = 0.0;
    for (double lambda : sp.eigenvalues) {
        if (lambda <= kLambdaFloor) continue;
        const double log_lambda = std::log(lambda);
        const double term = std::pow(lambda, 1.0 + s);
        a += term;
        b += term * log_lambda;
        c += term * log_lambda * log_lambda;
    }
    MuDerivatives d;
    d.first = -b / a;
    // Negative variance of ln(lambda) under the tilted weights; never above 0.
    d.second = std::min(-(c / a - (b / a) * (b / a)), 0.0);
    return d;
}

MuDerivatives mu_derivatives(const ChannelSpec& channel, const Prior& prior, double s) {
    return mu_derivatives_from_spectrum(spectrum(channel, prior), s);
}

double mu_tilde(const ChannelSpec& channel, const Prior& prior, double s) {
    if (!(s >= 1.0)) throw ValidationError("mu_tilde: s must be >= 1");
    return mu_tilde_from_pairs(make_pair_table(channel, prior), s);
}

double mu_tilde_prime(const ChannelSpec& channel, const Prior& prior, double s) {
    if (!(s >= 1.0)) throw ValidationError("mu_tilde_prime: s must be >= 1");
    return mu_tilde_prime_from_pairs(make_pair_table(channel, prior), s);
}

double mu_tilde_inf(const ChannelSpec& channel, const Prior& prior) {
    return mu_tilde_inf_from_pairs(make_pair_table(channel, prior));
}

double random_coding_rhs(const ChannelSpec& channel, const Prior& prior, int M, int n,
                         double s) {
    if (M < 1 || n < 1) throw ValidationError("random_coding_rhs: M and n must be >= 1");
    if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("random_coding_rhs: s must be in [0,1]");
    if (M == 1 && s > 0.0) return 0.0;
    const Spectrum sp = spectrum(channel, prior);
    const double trace_power = std::exp(-mu_from_spectrum(sp, s));
    return 2.0 * std::pow(static_cast<double>(M - 1), s) * std::pow(trace_power, n);
}

double expurgated_rhs(const ChannelSpec& channel, const Prior& prior, int M, int n,
                      double s) {
    if (M < 1 || n < 1) throw ValidationError("expurgated_rhs: M and n must be >= 1");
    if (!(s >= 1.0)) throw ValidationError("expurgated_rhs: s must be >= 1");
    if (M == 1) return 0.0;
    const PairTable table = make_pair_table(channel, prior);
    const double f = pair_sums(table, s).f;
    return std::pow(4.0 * static_cast<double>(M - 1) * std::pow(f, n), s);
}

ExponentPoint e_r_at(const ChannelSpec& channel, const Prior& prior, double rate) {
    if (!(rate >= 0.0)) throw ValidationError("e_r_at: rate must be >= 0");
    return e_r_from_spectrum(spectrum(channel, prior), rate);
}

ExponentPoint e_ex_at(const ChannelSpec& channel, const Prior& prior, double rate) {
    return e_ex_from_pairs(make_pair_table(channel, prior), rate);
}

CapacityResult capacity(const ChannelSpec& channel) {
    const int a = channel.alphabet_size();
    auto objective = [&channel](const std::vector<double>& pi) {
        return entropy(spectrum(channel, Prior{pi}));
    };
    SimplexResult best = optimize_simplex(objective, a, OptMode::Maximize);
    return CapacityResult{best.value, Prior{std::move(best.point)}};
}

ExponentPoint e_r_envelope(const ChannelSpec& channel, double rate) {
    if (!(rate >= 0.0)) throw ValidationError("e_r_envelope: rate must be >= 0");
    auto objective = [&](const std::vector<double>& pi) {
        return e_r_from_spectrum(spectrum(channel, Prior{pi}), rate).value;
    };
    SimplexResult best = optimize_simplex(objective, channel.alphabet_size(), OptMode::Maximize);
    return e_r_at(channel, Prior{best.point}, rate);
}

double e_r_envelope_value(const ChannelSpec& channel, double rate) {
    return e_r_envelope(channel, rate).value;
}

ExponentPoint e_ex_envelope(const ChannelSpec& channel, double rate) {
    auto objective = [&](const std::vector<double>& pi) {
        const PairTable table = make_pair_table(channel, Prior{pi});
        try {
            return e_ex_from_pairs(table, rate).value;
        } catch (const UnboundedParameter&) {
            // Valid lower bound: the bracket evaluated at the search cap.
            return mu_tilde_from_pairs(table, kSCap) - kSCap * rate;
        }
    };
    SimplexResult best = optimize_simplex(objective, channel.alphabet_size(), OptMode::Maximize);
    try {
        return e_ex_at(channel, Prior{best.point}, rate);
    } catch (const UnboundedParameter&) {
        ExponentPoint point{best.value, kSCap, Region::ExCurved};
        point.below_resolution = true;
        return point;
    }
}

ZeroRateResult zero_rate_exponent(const ChannelSpec& channel) {
    const Matrix& g = channel.gram();
    const int a = channel.alphabet_size();
    for (int i = 0; i < a; ++i) {
        for (int k = i + 1; k < a; ++k) {
            if (std::abs(g(i, k)) == 0.0) {
                ZeroRateResult result;
                result.value = kInf;
                result.orthogonal_witness = std::make_pair(i, k);
                return result;
            }
        }
    }
    auto objective = [&g, a](const std::vector<double>& pi) {
        double total = 0.0;
        for (int i = 0; i < a; ++i) {
            if (pi[static_cast<std::size_t>(i)] == 0.0) continue;
            for (int k = 0; k < a; ++k) {
                const double w = pi[static_cast<std::size_t>(i)] * pi[static_cast<std::size_t>(k)];
                if (w == 0.0) continue;
                total += w * 2.0 * std::log(std::min(std::abs(g(i, k)), 1.0));
            }
        }
        return total;
    };
    SimplexResult best = optimize_simplex(objective, a, OptMode::Minimize);
    ZeroRateResult result;
    result.value = -best.value;
    result.argmin = Prior{std::move(best.point)};
    return result;
}

RegionReport region_report(const ChannelSpec& channel, const Prior& prior) {
    const Spectrum sp = spectrum(channel, prior);
    const PairTable table = make_pair_table(channel, prior);
    RegionReport report;
    report.mu1 = mu_from_spectrum(sp, 1.0);
    report.mu_prime1 = mu_derivatives_from_spectrum(sp, 1.0).first;
    report.mut1 = mu_tilde_from_pairs(table, 1.0);
    report.mut_prime1 = mu_tilde_prime_from_pairs(table, 1.0);
    report.capacity_at_prior = mu_derivatives_from_spectrum(sp, 0.0).first;
    report.ordering = report.mut_prime1 <= report.mu_prime1 + 1e-12
                          ? RegionReport::Ordering::Generic
                          : RegionReport::Ordering::NoLinearPiece;
    return report;
}

std::pair<double, double> binary_eigenvalues(double epsilon, double pi1) {
    const double root = std::sqrt(1.0 - 4.0 * (1.0 - epsilon * epsilon) * pi1 * (1.0 - pi1));
    return {0.5 * (1.0 - root), 0.5 * (1.0 + root)};
}

double binary_mu(double epsilon, double s) {
    const auto [l1, l2] = binary_eigenvalues(epsilon, 0.5);
    if (s == 0.0) return 0.0;
    return -std::log(std::pow(l1, 1.0 + s) + std::pow(l2, 1.0 + s));
}

double binary_mu_tilde(double epsilon, double s) {
    return -s * std::log(0.5 * (1.0 + std::pow(epsilon, 2.0 / s)));
}

double binary_mu1(double epsilon) {
    return -std::log(0.5 * (1.0 + epsilon * epsilon));
}

double binary_mut_prime1(double epsilon) {
    const double eps2 = epsilon * epsilon;
    return binary_mu1(epsilon) + eps2 * std::log(eps2) / (1.0 + eps2);
}

double binary_mu_prime1(double epsilon) {
    const double lo = 0.5 * (1.0 - epsilon);
    const double hi = 0.5 * (1.0 + epsilon);
    return -((1.0 - epsilon) * (1.0 - epsilon) * std::log(lo) +
             (1.0 + epsilon) * (1.0 + epsilon) * std::log(hi)) /
           (2.0 * (1.0 + epsilon * epsilon));
}

double binary_capacity(double epsilon) {
    const double lo = 0.5 * (1.0 - epsilon);
    const double hi = 0.5 * (1.0 + epsilon);
    return -(lo * std::log(lo) + hi * std::log(hi));
}

double binary_zero_rate(double epsilon) { return -std::log(epsilon); }

BinaryReport binary_report(double epsilon, int pi_points, int s_points) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw DomainError("binary_report: epsilon must lie in (0, 1)");
    }
    if (pi_points < 2 || s_points < 2) {
        throw ValidationError("binary_report: need at least two grid points");
    }
    BinaryReport report;
    report.epsilon = epsilon;
    for (int i = 0; i < pi_points; ++i) {
        const double pi1 = static_cast<double>(i) / static_cast<double>(pi_points - 1);
        const auto [l1, l2] = binary_eigenvalues(epsilon, pi1);
        report.pi_grid.push_back(pi1);
        report.lambda1.push_back(l1);
        report.lambda2.push_back(l2);
    }
    report.mu1 = binary_mu1(epsilon);
    report.mut_prime1 = binary_mut_prime1(epsilon);
    report.mu_prime1 = binary_mu_prime1(epsilon);
    report.capacity = binary_capacity(epsilon);
    report.zero_rate = binary_zero_rate(epsilon);
    for (int i = 0; i < s_points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(s_points - 1);
        const double s_mu = t;
        const double s_mut = 1.0 + t * (kSCap - 1.0);
        report.mu_s_grid.push_back(s_mu);
        report.mu_samples.push_back(binary_mu(epsilon, s_mu));
        report.mut_s_grid.push_back(s_mut);
        report.mut_samples.push_back(binary_mu_tilde(epsilon, s_mut));
    }
    return report;
}

ExponentCurve curve(const ChannelSpec& channel, const Prior& prior, double r_min,
                    double r_max, int points) {
    if (!(r_min >= 0.0) || !(r_max > r_min)) {
        throw ValidationError("curve: need 0 <= r_min < r_max");
    }
    if (points < 2) throw ValidationError("curve: need at least two points");
    const Spectrum sp = spectrum(channel, prior);
    const PairTable table = make_pair_table(channel, prior);
    ExponentCurve out;
    out.points.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double rate =
            r_min + (r_max - r_min) * static_cast<double>(i) / static_cast<double>(points - 1);
        const ExponentPoint er = e_r_from_spectrum(sp, rate);
        const ExponentPoint ex = e_ex_from_pairs(table, rate);
        out.points.push_back(CurvePoint{rate, er.value, ex.value, combined_region(er, ex)});
    }
    return out;
}

ExponentCurve curve_envelope(const ChannelSpec& channel, double r_min, double r_max,
                             int points) {
    if (!(r_min >= 0.0) || !(r_max > r_min)) {
        throw ValidationError("curve: need 0 <= r_min < r_max");
    }
    if (points < 2) throw ValidationError("curve: need at least two points");
    ExponentCurve out;
    out.points.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double rate =
            r_min + (r_max - r_min) * static_cast<double>(i) / static_cast<double>(points - 1);
        const ExponentPoint er = e_r_envelope(channel, rate);
        const ExponentPoint ex = e_ex_envelope(channel, rate);
        out.points.push_back(CurvePoint{rate, er.value, ex.value, combined_region(er, ex)});
    }
    return out;
}

}  // namespace cqr

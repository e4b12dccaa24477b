#include "cqr/srm.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "cqr/exponents.hpp"
#include "cqr/rng.hpp"
#include "cqr/util.hpp"

namespace cqr {

namespace {

constexpr double kSlack = 1e-9;  // slack for the deterministic inequalities

void validate_caps(const ChannelSpec& channel, int M, int n, int samples) {
    if (M < 1) throw ValidationError("verify: M must be >= 1");
    if (M > kMaxCodebookSize) {
        throw ValidationError("verify: M = " + std::to_string(M) + " exceeds cap " +
                              std::to_string(kMaxCodebookSize));
    }
    if (n < 1) throw ValidationError("verify: n must be >= 1");
    if (samples < 1 || samples > kMaxSamples) {
        throw ValidationError("verify: samples must lie in [1, " +
                              std::to_string(kMaxSamples) + "]");
    }
    (void)channel;
}

double sample_stderr(std::span<const double> values, double mean) {
    if (values.size() < 2) return 0.0;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(values.size() - 1);
    return std::sqrt(var / static_cast<double>(values.size()));
}

struct PerCodeChecks {
    int eq_gram = 0;
    int union_bound = 0;
    int helstrom = 0;
};

PerCodeChecks check_code(const CodeGram& gram, const DecodingResult& decoded) {
    PerCodeChecks checks;
    if (decoded.average > decoded.gram_bound + kSlack) checks.eq_gram = 1;
    const int m = static_cast<int>(gram.rows());
    for (int k = 0; k < m; ++k) {
        if (decoded.per_word_error[static_cast<std::size_t>(k)] >
            pairwise_union_bound(gram, k) + kSlack) {
            checks.union_bound = 1;
            break;
        }
    }
    if (m >= 2 && decoded.max < helstrom_pair_lower(gram) - kSlack) checks.helstrom = 1;
    return checks;
}

nlohmann::ordered_json bound_table_json(const std::vector<BoundRow>& table) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const BoundRow& row : table) {
        rows.push_back({{"s", row.s}, {"rhs", row.rhs}, {"pass", row.pass}});
    }
    return rows;
}

}  // namespace

Complex product_overlap(std::span<const int> u, std::span<const int> v,
                        const ChannelSpec& channel) {
    if (u.size() != v.size()) {
        throw LengthMismatch("product_overlap: words have different lengths");
    }
    const Matrix& g = channel.gram();
    const int a = channel.alphabet_size();
    Complex prod(1.0, 0.0);
    for (std::size_t pos = 0; pos < u.size(); ++pos) {
        const int i = u[pos];
        const int k = v[pos];
        if (i < 0 || i >= a || k < 0 || k >= a) {
            throw ValidationError("product_overlap: letter out of range");
        }
        if (i == k) continue;  // G_ii = 1 by the unit-diagonal invariant
        prod *= g(i, k);
        if (prod == Complex(0.0, 0.0)) break;
    }
    return prod;
}

CodeGram code_gram(const Codebook& codebook) {
    if (codebook.channel == nullptr) throw ValidationError("code_gram: codebook has no channel");
    const int m = codebook.size();
    CodeGram gram(m, m);
    for (int k = 0; k < m; ++k) {
        gram(k, k) = Complex(1.0, 0.0);
        for (int l = k + 1; l < m; ++l) {
            const Complex overlap =
                product_overlap(codebook.word(k), codebook.word(l), *codebook.channel);
            gram(k, l) = overlap;
            gram(l, k) = std::conj(overlap);
        }
    }
    return gram;
}

DecodingResult srm_decode(const CodeGram& gram) {
    const int m = static_cast<int>(gram.rows());
    const Matrix root = psd_sqrt(gram).root;
    DecodingResult result;
    result.per_word_error.resize(static_cast<std::size_t>(m));
    double trace_root = 0.0;
    for (int k = 0; k < m; ++k) {
        const double amp = root(k, k).real();  // success amplitude of word k
        trace_root += amp;
        const double err = 1.0 - amp * amp;
        result.per_word_error[static_cast<std::size_t>(k)] = std::clamp(err, 0.0, 1.0);
    }
    result.average = 0.0;
    result.max = 0.0;
    for (double e : result.per_word_error) {
        result.average += e;
        result.max = std::max(result.max, e);
    }
    result.average /= static_cast<double>(m);
    result.gram_bound = (2.0 / static_cast<double>(m)) * (static_cast<double>(m) - trace_root);
    return result;
}

double helstrom_pair_lower(const CodeGram& gram) {
    const int m = static_cast<int>(gram.rows());
    if (m < 2) throw ValidationError("helstrom_pair_lower: need at least two codewords");
    double max_sq = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int k = i + 1; k < m; ++k) {
            max_sq = std::max(max_sq, std::norm(gram(i, k)));
        }
    }
    max_sq = std::min(max_sq, 1.0);
    return 0.5 * (1.0 - std::sqrt(1.0 - max_sq));
}

double pairwise_union_bound(const CodeGram& gram, int k) {
    const int m = static_cast<int>(gram.rows());
    if (k < 0 || k >= m) throw ValidationError("pairwise_union_bound: index out of range");
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i != k) total += std::norm(gram(i, k));
    }
    return total;
}

Codebook sample_codebook(const ChannelSpec& channel, const Prior& prior, int M, int n,
                         std::uint64_t seed, std::uint64_t index) {
    validate_prior(prior, channel.alphabet_size());
    if (M < 1 || n < 1) throw ValidationError("sample_codebook: M and n must be >= 1");
    Codebook cb;
    cb.n = n;
    cb.alphabet = channel.alphabet_size();
    cb.channel = &channel;
    cb.letters.resize(static_cast<std::size_t>(M) * static_cast<std::size_t>(n));
    for (std::size_t pos = 0; pos < cb.letters.size(); ++pos) {
        cb.letters[pos] = counter_categorical(prior.weights, seed, index, pos);
    }
    return cb;
}

RandomCodingReport verify_random_coding(const ChannelSpec& channel, const Prior& prior,
                                        int M, int n, int samples, std::uint64_t seed,
                                        const std::vector<double>& s_grid, int threads) {
    validate_caps(channel, M, n, samples);
    validate_prior(prior, channel.alphabet_size());

    RandomCodingReport report;
    report.M = M;
    report.n = n;
    report.samples = samples;
    report.seed = seed;

    std::vector<double> avg_errors(static_cast<std::size_t>(samples));
    std::vector<double> max_errors(static_cast<std::size_t>(samples));
    std::vector<PerCodeChecks> checks(static_cast<std::size_t>(samples));

    parallel_for_index(static_cast<std::size_t>(samples), threads, [&](std::size_t i) {
        const Codebook cb = sample_codebook(channel, prior, M, n, seed, i);
        const CodeGram gram = code_gram(cb);
        const DecodingResult decoded = srm_decode(gram);
        avg_errors[i] = decoded.average;
        max_errors[i] = decoded.max;
        checks[i] = M >= 2 ? check_code(gram, decoded) : PerCodeChecks{};
    });

    for (const PerCodeChecks& c : checks) {
        report.eq_gram_violations += c.eq_gram;
        report.union_violations += c.union_bound;
        report.helstrom_violations += c.helstrom;
    }
    report.mean_avg_error = pairwise_mean(avg_errors);
    report.stderr_avg_error = sample_stderr(avg_errors, report.mean_avg_error);
    report.max_avg_error = *std::max_element(avg_errors.begin(), avg_errors.end());
    report.mean_max_error = pairwise_mean(max_errors);

    const double cushion = report.mean_avg_error - 3.0 * report.stderr_avg_error;
    for (double s : s_grid) {
        BoundRow row;
        row.s = s;
        row.rhs = random_coding_rhs(channel, prior, M, n, s);
        row.pass = cushion <= row.rhs;
        report.bound_table.push_back(row);
    }

    report.deterministic_pass = report.eq_gram_violations == 0 &&
                                report.union_violations == 0 &&
                                report.helstrom_violations == 0;
    report.bounds_pass = std::all_of(report.bound_table.begin(), report.bound_table.end(),
                                     [](const BoundRow& row) { return row.pass; });
    report.all_pass = report.deterministic_pass && report.bounds_pass;
    return report;
}

ExpurgationReport verify_expurgation(const ChannelSpec& channel, const Prior& prior, int M,
                                     int n, int samples, std::uint64_t seed, double r,
                                     int threads) {
    if (!(r > 0.0 && r <= 1.0)) throw ValidationError("verify_expurgation: r must be in (0, 1]");
    const int m_prime = 2 * M - 1;
    validate_caps(channel, m_prime, n, samples);
    validate_prior(prior, channel.alphabet_size());

    ExpurgationReport report;
    report.M = M;
    report.M_prime = m_prime;
    report.n = n;
    report.samples = samples;
    report.seed = seed;
    report.r = r;

    std::vector<double> max_kept(static_cast<std::size_t>(samples));
    std::vector<double> pow_sums(static_cast<std::size_t>(samples));
    std::vector<PerCodeChecks> checks(static_cast<std::size_t>(samples));

    parallel_for_index(static_cast<std::size_t>(samples), threads, [&](std::size_t i) {
        const Codebook cb = sample_codebook(channel, prior, m_prime, n, seed, i);
        const CodeGram gram = code_gram(cb);
        const DecodingResult decoded = srm_decode(gram);
        checks[i] = m_prime >= 2 ? check_code(gram, decoded) : PerCodeChecks{};

        std::vector<double> sorted = decoded.per_word_error;
        std::sort(sorted.begin(), sorted.end());
        max_kept[i] = sorted[static_cast<std::size_t>(M - 1)];  // worst of the kept M

        double pow_sum = 0.0;
        for (double lambda : decoded.per_word_error) pow_sum += std::pow(lambda, r);
        pow_sums[i] = pow_sum;
    });

    for (const PerCodeChecks& c : checks) {
        report.eq_gram_violations += c.eq_gram;
        report.union_violations += c.union_bound;
        report.helstrom_violations += c.helstrom;
    }

    report.mean_lambda_pow_r =
        pairwise_sum(pow_sums) /
        (static_cast<double>(samples) * static_cast<double>(m_prime));
    report.threshold = std::pow(2.0 * report.mean_lambda_pow_r, 1.0 / r);

    int clean = 0;
    for (double v : max_kept) {
        if (v <= report.threshold) ++clean;
    }
    report.fraction_clean = static_cast<double>(clean) / static_cast<double>(samples);
    report.min_max_kept = *std::min_element(max_kept.begin(), max_kept.end());
    report.max_max_kept = *std::max_element(max_kept.begin(), max_kept.end());
    report.mean_max_kept = pairwise_mean(max_kept);
    report.expurgated_bound = expurgated_rhs(channel, prior, M, n, 1.0 / r);

    report.fraction_ok = report.fraction_clean >= 0.5;
    report.deterministic_pass = report.eq_gram_violations == 0 &&
                                report.union_violations == 0 &&
                                report.helstrom_violations == 0;
    report.all_pass = report.deterministic_pass && report.fraction_ok;
    return report;
}

std::string report_to_json(const RandomCodingReport& report) {
    nlohmann::ordered_json j;
    j["kind"] = "random_coding";
    j["M"] = report.M;
    j["n"] = report.n;
    j["samples"] = report.samples;
    j["seed"] = report.seed;
    j["mean_avg_error"] = report.mean_avg_error;
    j["stderr_avg_error"] = report.stderr_avg_error;
    j["max_avg_error"] = report.max_avg_error;
    j["mean_max_error"] = report.mean_max_error;
    j["violations"] = {{"gram_trace", report.eq_gram_violations},
                       {"pairwise_union", report.union_violations},
                       {"helstrom", report.helstrom_violations}};
    j["bound_table"] = bound_table_json(report.bound_table);
    j["deterministic_pass"] = report.deterministic_pass;
    j["bounds_pass"] = report.bounds_pass;
    j["all_pass"] = report.all_pass;
    return j.dump(2) + "\n";
}

std::string report_to_json(const ExpurgationReport& report) {
    nlohmann::ordered_json j;
    j["kind"] = "expurgation";
    j["M"] = report.M;
    j["M_prime"] = report.M_prime;
    j["n"] = report.n;
    j["samples"] = report.samples;
    j["seed"] = report.seed;
    j["r"] = report.r;
    j["mean_lambda_pow_r"] = report.mean_lambda_pow_r;
    j["threshold"] = report.threshold;
    j["fraction_clean"] = report.fraction_clean;
    j["min_max_kept"] = report.min_max_kept;
    j["mean_max_kept"] = report.mean_max_kept;
    j["max_max_kept"] = report.max_max_kept;
    j["expurgated_bound"] = report.expurgated_bound;
    j["violations"] = {{"gram_trace", report.eq_gram_violations},
                       {"pairwise_union", report.union_violations},
                       {"helstrom", report.helstrom_violations}};
    j["fraction_ok"] = report.fraction_ok;
    j["deterministic_pass"] = report.deterministic_pass;
    j["all_pass"] = report.all_pass;
    return j.dump(2) + "\n";
}

}  // namespace cqr

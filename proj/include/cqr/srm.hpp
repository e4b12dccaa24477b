// Exact square-root-measurement decoding on explicit codebooks, the per-code
// Gram-trace bound, random-codebook Monte Carlo verification of the
// random-coding bound, constructive expurgation experiments, and the
// two-hypothesis (Helstrom) lower bound. Codeword Gram matrices are always
// built from single-letter overlaps; tensor-product vectors are never
// materialized.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cqr/channel.hpp"

namespace cqr {

inline constexpr int kMaxCodebookSize = 512;
inline constexpr int kMaxSamples = 1000000;

struct Codebook {
    int n = 0;                 // block length
    int alphabet = 0;          // letters are in {0, ..., alphabet-1}
    std::vector<int> letters;  // M x n, row-major
    const ChannelSpec* channel = nullptr;

    int size() const { return n == 0 ? 0 : static_cast<int>(letters.size()) / n; }
    std::span<const int> word(int k) const {
        return {letters.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(n),
                static_cast<std::size_t>(n)};
    }
};

using CodeGram = Matrix;

struct DecodingResult {
    std::vector<double> per_word_error;  // each in [0, 1]
    double average = 0.0;
    double max = 0.0;
    double gram_bound = 0.0;  // (2/M) Sp(E - Gamma^{1/2}); always >= average
};

// Inner product of two tensor-product codeword states via the single-letter
// product formula. Throws LengthMismatch for unequal lengths.
Complex product_overlap(std::span<const int> u, std::span<const int> v,
                        const ChannelSpec& channel);

// M x M matrix of pairwise codeword overlaps.
CodeGram code_gram(const Codebook& codebook);

// Exact per-word SRM error probabilities: 1 - (Gamma^{1/2}_kk)^2. Duplicate
// codewords make Gamma rank-deficient; clamping in the square root covers it.
DecodingResult srm_decode(const CodeGram& gram);

// (1/2)[1 - sqrt(1 - max_{u != u'} |Gamma_uu'|^2)]; a lower bound on the
// worst-word error of ANY decision rule. Requires M >= 2.
double helstrom_pair_lower(const CodeGram& gram);

// sum_{i != k} |Gamma_ik|^2; upper-bounds the SRM error of word k.
double pairwise_union_bound(const CodeGram& gram, int k);

// M*n letters drawn independently from the prior. Fully determined by
// (seed, index): same inputs, same codebook, on any platform or thread count.
Codebook sample_codebook(const ChannelSpec& channel, const Prior& prior, int M, int n,
                         std::uint64_t seed, std::uint64_t index);

struct BoundRow {
    double s = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

struct RandomCodingReport {
    int M = 0, n = 0, samples = 0;
    std::uint64_t seed = 0;
    double mean_avg_error = 0.0;
    double stderr_avg_error = 0.0;
    double max_avg_error = 0.0;
    double mean_max_error = 0.0;
    int eq_gram_violations = 0;      // average > gram_bound + slack
    int union_violations = 0;        // some word above its pairwise union bound
    int helstrom_violations = 0;     // max error below the two-word lower bound
    std::vector<BoundRow> bound_table;
    bool deterministic_pass = false;
    bool bounds_pass = false;
    bool all_pass = false;
};

// Samples codebooks, decodes each exactly, counts violations of the
// deterministic per-code inequalities, and checks the empirical mean against
// the random-coding right-hand side on the s grid with a 3-standard-error
// cushion.
RandomCodingReport verify_random_coding(const ChannelSpec& channel, const Prior& prior,
                                        int M, int n, int samples, std::uint64_t seed,
                                        const std::vector<double>& s_grid, int threads = 1);

struct ExpurgationReport {
    int M = 0, M_prime = 0, n = 0, samples = 0;
    std::uint64_t seed = 0;
    double r = 1.0;
    double mean_lambda_pow_r = 0.0;   // ensemble mean of lambda^r over all words
    double threshold = 0.0;           // [2 * mean_lambda_pow_r]^{1/r}
    double fraction_clean = 0.0;      // samples whose kept words all meet the threshold
    double min_max_kept = 0.0;        // best sampled code's worst kept word
    double mean_max_kept = 0.0;
    double max_max_kept = 0.0;
    double expurgated_bound = 0.0;    // expurgated_rhs at s = 1/r
    int eq_gram_violations = 0;
    int union_violations = 0;
    int helstrom_violations = 0;
    bool fraction_ok = false;         // >= 1/2, the selection-lemma guarantee
    bool deterministic_pass = false;
    bool all_pass = false;
};

// Constructive expurgation: sample codes of size 2M-1, keep the M words with
// the smallest exact SRM errors, and check the selection-lemma criterion
// empirically.
ExpurgationReport verify_expurgation(const ChannelSpec& channel, const Prior& prior, int M,
                                     int n, int samples, std::uint64_t seed, double r,
                                     int threads = 1);

// Deterministic serializations (independent of thread count).
std::string report_to_json(const RandomCodingReport& report);
std::string report_to_json(const ExpurgationReport& report);

}  // namespace cqr

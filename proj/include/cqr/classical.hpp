// Commuting-case bounds: the classical random-coding right-hand side and the
// Bhattacharyya expurgated form for channels given by transition-probability
// rows, plus the pure-state reduction cross-checks exercised in tests.
#pragma once

#include <string>
#include <vector>

#include "cqr/channel.hpp"

namespace cqr {

struct DiagonalChannel {
    // rows[i][j] = probability of output j given input i; each row sums to 1.
    std::vector<std::vector<double>> rows;

    int alphabet_size() const { return static_cast<int>(rows.size()); }
    int output_size() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }
};

// Throws ValidationError unless every row is a probability vector of a common
// length.
void validate_diagonal_channel(const DiagonalChannel& channel);

// Parses {"rows": [[...], ...]} documents.
DiagonalChannel load_classical(const std::string& document);
DiagonalChannel load_classical_file(const std::string& path);

// sum_j [sum_i pi_i (row_i[j])^{1/(1+s)}]^{1+s}; the single-letter bracket of
// the classical random-coding bound.
double gallager_bracket(const DiagonalChannel& channel, const Prior& prior, double s);

// (M-1)^s * bracket^n for s in (0, 1].
double gallager_random_rhs(const DiagonalChannel& channel, const Prior& prior, int M, int n,
                           double s);
double gallager_random_rhs_min(const DiagonalChannel& channel, const Prior& prior, int M,
                               int n, const std::vector<double>& s_grid);

// sum_j sqrt(row_i[j] * row_k[j]) in [0, 1]; equals 1 iff the rows coincide.
double bhattacharyya(const DiagonalChannel& channel, int i, int k);

// (4 (M-1) [sum_{i,k} pi_i pi_k bhattacharyya(i,k)^{1/s}]^n)^s for s >= 1.
double expurgated_classical_rhs(const DiagonalChannel& channel, const Prior& prior, int M,
                                int n, double s);
double expurgated_classical_rhs_min(const DiagonalChannel& channel, const Prior& prior,
                                    int M, int n, const std::vector<double>& s_grid);

// True when every row is a standard basis vector, i.e. the channel is a
// commuting pure-state configuration.
bool is_deterministic(const DiagonalChannel& channel);

// Embeds a deterministic channel as pure basis states, for the commuting-case
// consistency checks. Throws ValidationError for non-deterministic rows.
ChannelSpec embed_deterministic(const DiagonalChannel& channel);

}  // namespace cqr

// Channel specification for pure-state inputs, prior distributions, the
// averaged density operator, and its spectrum. A channel is a finite alphabet
// of unit vectors; every downstream quantity depends on the states only
// through inner products, so a Gram-only representation is first class.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqr/hermitian.hpp"

namespace cqr {

struct Prior {
    std::vector<double> weights;

    int size() const { return static_cast<int>(weights.size()); }
    double operator[](int i) const { return weights[static_cast<std::size_t>(i)]; }
};

Prior uniform_prior(int alphabet_size);

// Throws ValidationError unless weights are nonnegative and sum to 1
// within 1e-12, with length matching alphabet_size (when >= 0).
void validate_prior(const Prior& prior, int alphabet_size = -1);

// Eigenvalues of the averaged density operator; a probability vector.
struct Spectrum {
    std::vector<double> eigenvalues;
};

class ChannelSpec {
  public:
    // States are the columns of `vectors` (d rows, a columns), each unit norm.
    static ChannelSpec from_states(Matrix vectors,
                                   std::optional<Prior> file_prior = std::nullopt);
    // Gram matrix of pairwise inner products; must pass validate_gram.
    static ChannelSpec from_gram(Matrix gram, std::optional<Prior> file_prior = std::nullopt);

    int alphabet_size() const { return static_cast<int>(gram_.rows()); }
    bool has_states() const { return states_.has_value(); }
    int dim() const;

    // Always available; for state-vector channels it is derived and cached.
    const Matrix& gram() const { return gram_; }
    // Throws RepresentationUnavailable for Gram-only channels.
    const Matrix& states() const;

    const std::optional<Prior>& file_prior() const { return file_prior_; }
    // The file's prior when present, otherwise uniform.
    Prior default_prior() const;

  private:
    ChannelSpec() = default;
    std::optional<Matrix> states_;  // d x a, columns are the signal vectors
    Matrix gram_;                   // a x a
    std::optional<Prior> file_prior_;
};

// Parses a channel document (see README for the format). Throws ParseError on
// malformed documents and ValidationError when an invariant fails.
ChannelSpec load_channel(const std::string& document);
ChannelSpec load_channel_file(const std::string& path);

// The averaged density operator of a state-vector channel: a d x d Hermitian
// PSD matrix with unit trace.
Matrix average_state(const ChannelSpec& channel, const Prior& prior);

// Eigenvalues of the averaged state. State-vector channels diagonalize the
// d x d operator; Gram-only channels diagonalize the weighted Gram matrix
// W_ik = sqrt(pi_i) sqrt(pi_k) G_ik, which shares its nonzero spectrum.
Spectrum spectrum(const ChannelSpec& channel, const Prior& prior);

// Von Neumann entropy -sum lambda ln lambda in nats, with 0 ln 0 = 0.
double entropy(const Spectrum& spectrum);

}  // namespace cqr

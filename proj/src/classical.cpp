#include "cqr/classical.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace cqr {

void validate_diagonal_channel(const DiagonalChannel& channel) {
    if (channel.rows.empty()) throw ValidationError("classical: no rows");
    const std::size_t d = channel.rows[0].size();
    if (d == 0) throw ValidationError("classical: empty rows");
    for (std::size_t i = 0; i < channel.rows.size(); ++i) {
        const auto& row = channel.rows[i];
        if (row.size() != d) throw ValidationError("classical: ragged rows");
        double sum = 0.0;
        for (double p : row) {
            if (!(p >= 0.0)) {
                throw ValidationError("classical: negative probability in row " +
                                      std::to_string(i));
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw ValidationError("classical: row " + std::to_string(i) + " sums to " +
                                  std::to_string(sum));
        }
    }
}

DiagonalChannel load_classical(const std::string& document) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("classical: ") + e.what());
    }
    DiagonalChannel channel;
    try {
        for (const auto& row : doc.at("rows")) {
            channel.rows.emplace_back();
            for (const auto& v : row) channel.rows.back().push_back(v.get<double>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("classical: ") + e.what());
    }
    validate_diagonal_channel(channel);
    return channel;
}

DiagonalChannel load_classical_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("classical: cannot open " + path);
    std::ostringstream oss;
    oss << in.rdbuf();
    return load_classical(oss.str());
}

double gallager_bracket(const DiagonalChannel& channel, const Prior& prior, double s) {
    validate_diagonal_channel(channel);
    validate_prior(prior, channel.alphabet_size());
    const double power = 1.0 / (1.0 + s);
    double total = 0.0;
    for (int j = 0; j < channel.output_size(); ++j) {
        double inner = 0.0;
        for (int i = 0; i < channel.alphabet_size(); ++i) {
            const double p = channel.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (p > 0.0 && prior[i] > 0.0) inner += prior[i] * std::pow(p, power);
        }
        total += std::pow(inner, 1.0 + s);
    }
    return total;
}

double gallager_random_rhs(const DiagonalChannel& channel, const Prior& prior, int M, int n,
                           double s) {
    if (M < 1 || n < 1) throw ValidationError("gallager_random_rhs: M and n must be >= 1");
    if (!(s > 0.0 && s <= 1.0)) {
        throw ValidationError("gallager_random_rhs: s must lie in (0, 1]");
    }
    return std::pow(static_cast<double>(M - 1), s) *
           std::pow(gallager_bracket(channel, prior, s), n);
}

double gallager_random_rhs_min(const DiagonalChannel& channel, const Prior& prior, int M,
                               int n, const std::vector<double>& s_grid) {
    double best = std::numeric_limits<double>::infinity();
    for (double s : s_grid) best = std::min(best, gallager_random_rhs(channel, prior, M, n, s));
    return best;
}

double bhattacharyya(const DiagonalChannel& channel, int i, int k) {
    validate_diagonal_channel(channel);
    const int a = channel.alphabet_size();
    if (i < 0 || i >= a || k < 0 || k >= a) {
        throw ValidationError("bhattacharyya: index out of range");
    }
    double total = 0.0;
    for (int j = 0; j < channel.output_size(); ++j) {
        total += std::sqrt(channel.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                           channel.rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
    }
    return std::min(total, 1.0);
}

double expurgated_classical_rhs(const DiagonalChannel& channel, const Prior& prior, int M,
                                int n, double s) {
    if (M < 1 || n < 1) throw ValidationError("expurgated_classical_rhs: M and n must be >= 1");
    if (!(s >= 1.0)) throw ValidationError("expurgated_classical_rhs: s must be >= 1");
    validate_prior(prior, channel.alphabet_size());
    if (M == 1) return 0.0;
    const int a = channel.alphabet_size();
    double inner = 0.0;
    for (int i = 0; i < a; ++i) {
        for (int k = 0; k < a; ++k) {
            const double w = prior[i] * prior[k];
            if (w == 0.0) continue;
            const double b = bhattacharyya(channel, i, k);
            if (b > 0.0) inner += w * std::pow(b, 1.0 / s);
        }
    }
    return std::pow(4.0 * static_cast<double>(M - 1) * std::pow(inner, n), s);
}

double expurgated_classical_rhs_min(const DiagonalChannel& channel, const Prior& prior,
                                    int M, int n, const std::vector<double>& s_grid) {
    double best = std::numeric_limits<double>::infinity();
    for (double s : s_grid) {
        best = std::min(best, expurgated_classical_rhs(channel, prior, M, n, s));
    }
    return best;
}

bool is_deterministic(const DiagonalChannel& channel) {
    for (const auto& row : channel.rows) {
        int ones = 0;
        for (double p : row) {
            if (p == 1.0) {
                ++ones;
            } else if (p != 0.0) {
                return false;
            }
        }
        if (ones != 1) return false;
    }
    return true;
}

ChannelSpec embed_deterministic(const DiagonalChannel& channel) {
    validate_diagonal_channel(channel);
    if (!is_deterministic(channel)) {
        throw ValidationError("classical: rows are not basis vectors; no pure-state embedding");
    }
    Matrix states = Matrix::Zero(channel.output_size(), channel.alphabet_size());
    for (int i = 0; i < channel.alphabet_size(); ++i) {
        for (int j = 0; j < channel.output_size(); ++j) {
            if (channel.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == 1.0) {
                states(j, i) = Complex(1.0, 0.0);
            }
        }
    }
    return ChannelSpec::from_states(std::move(states));
}

}  // namespace cqr

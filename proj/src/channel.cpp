#include "cqr/channel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cqr {

Prior uniform_prior(int alphabet_size) {
    if (alphabet_size < 1) throw ValidationError("uniform_prior: alphabet size must be >= 1");
    return Prior{std::vector<double>(static_cast<std::size_t>(alphabet_size),
                                     1.0 / static_cast<double>(alphabet_size))};
}

void validate_prior(const Prior& prior, int alphabet_size) {
    if (alphabet_size >= 0 && prior.size() != alphabet_size) {
        throw ValidationError("prior: length " + std::to_string(prior.size()) +
                              " does not match alphabet size " + std::to_string(alphabet_size));
    }
    double sum = 0.0;
    for (double w : prior.weights) {
        if (!(w >= 0.0)) throw ValidationError("prior: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw ValidationError("prior: weights sum to " + std::to_string(sum) + ", expected 1");
    }
}

int ChannelSpec::dim() const {
    if (!states_) throw RepresentationUnavailable("channel: no state-vector representation");
    return static_cast<int>(states_->rows());
}

const Matrix& ChannelSpec::states() const {
    if (!states_) throw RepresentationUnavailable("channel: no state-vector representation");
    return *states_;
}

Prior ChannelSpec::default_prior() const {
    return file_prior_ ? *file_prior_ : uniform_prior(alphabet_size());
}

ChannelSpec ChannelSpec::from_states(Matrix vectors, std::optional<Prior> file_prior) {
    if (vectors.cols() < 1 || vectors.rows() < 1) {
        throw ValidationError("channel: need at least one state of dimension >= 1");
    }
    for (Eigen::Index i = 0; i < vectors.cols(); ++i) {
        const double norm = vectors.col(i).norm();
        if (std::abs(norm - 1.0) > 1e-9) {
            throw ValidationError("channel: state " + std::to_string(i) + " has norm " +
                                  std::to_string(norm) + ", expected 1");
        }
    }
    ChannelSpec spec;
    spec.gram_ = vectors.adjoint() * vectors;
    // The states are unit vectors; pin the diagonal to the exact invariant so
    // overlap products of repeated letters stay exact.
    for (Eigen::Index i = 0; i < spec.gram_.rows(); ++i) spec.gram_(i, i) = Complex(1.0, 0.0);
    spec.states_ = std::move(vectors);
    GramDiagnostics diag = validate_gram(spec.gram_);
    if (!diag.valid()) {
        throw ValidationError("channel: derived Gram matrix failed validation");
    }
    if (file_prior) validate_prior(*file_prior, spec.alphabet_size());
    spec.file_prior_ = std::move(file_prior);
    return spec;
}

ChannelSpec ChannelSpec::from_gram(Matrix gram, std::optional<Prior> file_prior) {
    GramDiagnostics diag = validate_gram(gram);
    if (!diag.valid()) {
        std::ostringstream oss;
        oss << "channel: Gram matrix failed validation (hermitian=" << diag.hermitian
            << " psd=" << diag.psd << " unit_diagonal=" << diag.unit_diagonal
            << " overlaps_bounded=" << diag.overlaps_bounded << ")";
        throw ValidationError(oss.str());
    }
    ChannelSpec spec;
    spec.gram_ = std::move(gram);
    if (file_prior) validate_prior(*file_prior, spec.alphabet_size());
    spec.file_prior_ = std::move(file_prior);
    return spec;
}

namespace {

using nlohmann::json;

Matrix parse_complex_matrix(const json& re, const json* im, const std::string& what) {
    if (!re.is_array() || re.empty() || !re[0].is_array()) {
        throw ParseError(what + ": \"re\" must be a 2-d array");
    }
    const auto rows = re.size();
    const auto cols = re[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!re[i].is_array() || re[i].size() != cols) {
            throw ParseError(what + ": ragged \"re\" rows");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            double real = re[i][j].get<double>();
            double imag = 0.0;
            if (im) {
                if (!im->is_array() || im->size() != rows || !(*im)[i].is_array() ||
                    (*im)[i].size() != cols) {
                    throw ParseError(what + ": \"im\" shape does not match \"re\"");
                }
                imag = (*im)[i][j].get<double>();
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Complex(real, imag);
        }
    }
    return m;
}

std::optional<Prior> parse_prior(const json& doc) {
    if (!doc.contains("prior")) return std::nullopt;
    const json& p = doc["prior"];
    if (!p.is_array()) throw ParseError("channel: \"prior\" must be an array");
    Prior prior;
    for (const auto& v : p) prior.weights.push_back(v.get<double>());
    return prior;
}

}  // namespace

ChannelSpec load_channel(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("channel: ") + e.what());
    }
    try {
        if (!doc.contains("format")) throw ParseError("channel: missing \"format\"");
        const std::string format = doc["format"].get<std::string>();
        std::optional<Prior> prior = parse_prior(doc);

        if (format == "states") {
            if (!doc.contains("states")) throw ParseError("channel: missing \"states\"");
            const json& st = doc["states"];
            const int dim = st.at("dim").get<int>();
            const json& vecs = st.at("vectors");
            if (!vecs.is_array() || vecs.empty()) {
                throw ParseError("channel: \"vectors\" must be a nonempty array");
            }
            Matrix m(dim, static_cast<Eigen::Index>(vecs.size()));
            for (std::size_t i = 0; i < vecs.size(); ++i) {
                const json& v = vecs[i];
                const json& re = v.at("re");
                if (!re.is_array() || static_cast<int>(re.size()) != dim) {
                    throw ParseError("channel: vector " + std::to_string(i) +
                                     " \"re\" length != dim");
                }
                const bool has_im = v.contains("im");
                if (has_im && static_cast<int>(v["im"].size()) != dim) {
                    throw ParseError("channel: vector " + std::to_string(i) +
                                     " \"im\" length != dim");
                }
                for (int j = 0; j < dim; ++j) {
                    m(j, static_cast<Eigen::Index>(i)) =
                        Complex(re[static_cast<std::size_t>(j)].get<double>(),
                                has_im ? v["im"][static_cast<std::size_t>(j)].get<double>() : 0.0);
                }
            }
            return ChannelSpec::from_states(std::move(m), std::move(prior));
        }
        if (format == "gram") {
            if (!doc.contains("gram")) throw ParseError("channel: missing \"gram\"");
            const json& g = doc["gram"];
            const json* im = g.contains("im") ? &g["im"] : nullptr;
            Matrix m = parse_complex_matrix(g.at("re"), im, "channel gram");
            if (m.rows() != m.cols()) throw ParseError("channel: gram must be square");
            return ChannelSpec::from_gram(std::move(m), std::move(prior));
        }
        throw ParseError("channel: unknown format \"" + format + "\"");
    } catch (const json::exception& e) {
        throw ParseError(std::string("channel: ") + e.what());
    }
}

ChannelSpec load_channel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("channel: cannot open " + path);
    std::ostringstream oss;
    oss << in.rdbuf();
    return load_channel(oss.str());
}

Matrix average_state(const ChannelSpec& channel, const Prior& prior) {
    validate_prior(prior, channel.alphabet_size());
    const Matrix& psi = channel.states();
    Matrix avg = Matrix::Zero(psi.rows(), psi.rows());
    for (int i = 0; i < channel.alphabet_size(); ++i) {
        avg.noalias() += prior[i] * (psi.col(i) * psi.col(i).adjoint());
    }
    return avg;
}

Spectrum spectrum(const ChannelSpec& channel, const Prior& prior) {
    validate_prior(prior, channel.alphabet_size());
    Matrix target;
    if (channel.has_states()) {
        target = average_state(channel, prior);
    } else {
        // Weighted Gram matrix: same nonzero eigenvalues as the operator.
        const Matrix& g = channel.gram();
        const int a = channel.alphabet_size();
        target.resize(a, a);
        for (int i = 0; i < a; ++i) {
            const double si = std::sqrt(prior[i]);
            for (int k = 0; k < a; ++k) {
                target(i, k) = si * std::sqrt(prior[k]) * g(i, k);
            }
        }
    }
    EigenSystem es = eig_hermitian(target);
    Spectrum sp;
    sp.eigenvalues.reserve(static_cast<std::size_t>(es.eigenvalues.size()));
    for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
        // Roundoff can push eigenvalues of a PSD matrix slightly negative.
        sp.eigenvalues.push_back(std::max(es.eigenvalues(i), 0.0));
    }
    return sp;
}

double entropy(const Spectrum& sp) {
    double h = 0.0;
    for (double lambda : sp.eigenvalues) {
        if (lambda > 0.0) h -= lambda * std::log(lambda);
    }
    return h;
}

}  // namespace cqr

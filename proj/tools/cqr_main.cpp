// cqr: reliability-function bounds for pure-state channels.
//
// Subcommands: capacity, curve, zero-rate, binary, verify, classical.
// Rates and exponents are in nats unless --bits is given; all randomized
// commands require an explicit --seed.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqr/classical.hpp"
#include "cqr/exponents.hpp"
#include "cqr/optimize.hpp"
#include "cqr/srm.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitNumeric = 3;

const double kLn2 = std::log(2.0);

std::string fmt17(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// JSON value for a possibly-infinite exponent: number or the "inf" token.
ordered_json json_extended(double v) {
    if (std::isinf(v)) return "inf";
    return v;
}

struct OutputOptions {
    std::string out_path;  // empty = stdout
    bool bits = false;

    double rate(double nats) const { return bits ? nats / kLn2 : nats; }
};

void write_output(const OutputOptions& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) throw cqr::ValidationError("cannot open output file " + opts.out_path);
    out << text;
}

std::vector<double> parse_s_grid(const std::string& spec) {
    double lo = 0.0, hi = 0.0, step = 0.0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0 ||
        hi < lo) {
        throw cqr::ValidationError("bad --s-grid \"" + spec + "\"; expected lo:hi:step");
    }
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double s = lo + step * i;
        if (s > hi + 1e-12) break;
        grid.push_back(std::min(s, hi));
    }
    return grid;
}

cqr::Prior load_prior_file(const std::string& path, int alphabet_size) {
    std::ifstream in(path);
    if (!in) throw cqr::ParseError("cannot open prior file " + path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw cqr::ParseError(std::string("prior file: ") + e.what());
    }
    const ordered_json& arr = doc.is_array() ? doc : doc.at("prior");
    cqr::Prior prior;
    for (const auto& v : arr) prior.weights.push_back(v.get<double>());
    cqr::validate_prior(prior, alphabet_size);
    return prior;
}

// `spec` is "uniform", a path, or (when allowed) "optimize", which returns
// nullopt so the caller can run the envelope.
std::optional<cqr::Prior> resolve_prior(const std::string& spec, const cqr::ChannelSpec& channel,
                                        bool allow_optimize) {
    if (spec == "optimize") {
        if (!allow_optimize) {
            throw cqr::ValidationError("--prior optimize is not supported by this command");
        }
        return std::nullopt;
    }
    if (spec == "uniform") return cqr::uniform_prior(channel.alphabet_size());
    if (spec.empty() || spec == "file") return channel.default_prior();
    return load_prior_file(spec, channel.alphabet_size());
}

int run_capacity(const std::string& channel_path, const OutputOptions& opts) {
    const auto channel = cqr::load_channel_file(channel_path);
    const auto result = cqr::capacity(channel);
    ordered_json j;
    j["command"] = "capacity";
    j["channel"] = channel_path;
    j["capacity_nats"] = result.value;
    if (opts.bits) j["capacity_bits"] = result.value / kLn2;
    j["argmax_prior"] = result.argmax.weights;
    j["optimizer"] = {{"grid_step", cqr::default_grid_step(channel.alphabet_size())},
                      {"refinement", "nelder-mead"},
                      {"refinement_seeds", 5}};
    write_output(opts, j.dump(2) + "\n");
    return kExitOk;
}

int run_zero_rate(const std::string& channel_path, const OutputOptions& opts) {
    const auto channel = cqr::load_channel_file(channel_path);
    const auto result = cqr::zero_rate_exponent(channel);
    ordered_json j;
    j["command"] = "zero_rate";
    j["channel"] = channel_path;
    j["zero_rate_exponent_nats"] = json_extended(result.value);
    if (opts.bits && !std::isinf(result.value)) {
        j["zero_rate_exponent_bits"] = result.value / kLn2;
    }
    if (result.argmin) j["argmin_prior"] = result.argmin->weights;
    if (result.orthogonal_witness) {
        j["orthogonal_witness"] = {result.orthogonal_witness->first,
                                   result.orthogonal_witness->second};
    }
    write_output(opts, j.dump(2) + "\n");
    return kExitOk;
}

int run_curve(const std::string& channel_path, const std::string& prior_spec, double r_min,
              double r_max, int points, const std::string& format,
              const OutputOptions& opts) {
    const auto channel = cqr::load_channel_file(channel_path);
    const auto prior = resolve_prior(prior_spec, channel, /*allow_optimize=*/true);
    const cqr::ExponentCurve curve = prior
                                         ? cqr::curve(channel, *prior, r_min, r_max, points)
                                         : cqr::curve_envelope(channel, r_min, r_max, points);
    if (format == "csv") {
        std::string text = "R,E_r,E_ex,region\n";
        for (const auto& p : curve.points) {
            text += fmt17(opts.rate(p.rate)) + "," + fmt17(opts.rate(p.e_r)) + "," +
                    fmt17(opts.rate(p.e_ex)) + "," + cqr::region_name(p.region) + "\n";
        }
        write_output(opts, text);
    } else {
        ordered_json rows = ordered_json::array();
        for (const auto& p : curve.points) {
            rows.push_back({{"R", opts.rate(p.rate)},
                            {"E_r", opts.rate(p.e_r)},
                            {"E_ex", json_extended(opts.rate(p.e_ex))},
                            {"region", cqr::region_name(p.region)}});
        }
        ordered_json j;
        j["command"] = "curve";
        j["channel"] = channel_path;
        j["prior"] = prior ? ordered_json(prior->weights) : ordered_json("optimize");
        j["points"] = rows;
        write_output(opts, j.dump(2) + "\n");
    }
    return kExitOk;
}

int run_binary(double epsilon, const OutputOptions& opts) {
    const auto report = cqr::binary_report(epsilon);

    // Cross-check the closed forms against the generic eigendecomposition path.
    cqr::Matrix states(2, 2);
    states(0, 0) = 1.0;
    states(1, 0) = 0.0;
    states(0, 1) = epsilon;
    states(1, 1) = std::sqrt(1.0 - epsilon * epsilon);
    const auto channel = cqr::ChannelSpec::from_states(std::move(states));
    const auto half = cqr::uniform_prior(2);
    const auto generic = cqr::region_report(channel, half);
    double deviation = std::abs(report.mu1 - generic.mu1);
    deviation = std::max(deviation, std::abs(report.mu_prime1 - generic.mu_prime1));
    deviation = std::max(deviation, std::abs(report.mut_prime1 - generic.mut_prime1));
    deviation = std::max(deviation, std::abs(report.capacity - generic.capacity_at_prior));
    deviation = std::max(deviation, std::abs(report.zero_rate - cqr::mu_tilde_inf(channel, half)));

    const double scale = opts.bits ? 1.0 / kLn2 : 1.0;
    ordered_json j;
    j["command"] = "binary";
    j["epsilon"] = epsilon;
    j["units"] = opts.bits ? "bits" : "nats";
    j["scalars"] = {{"mu1", scale * report.mu1},
                    {"mut_prime1", scale * report.mut_prime1},
                    {"mu_prime1", scale * report.mu_prime1},
                    {"capacity", scale * report.capacity},
                    {"zero_rate", scale * report.zero_rate}};
    j["cross_check_max_deviation"] = deviation;
    j["pi_grid"] = report.pi_grid;
    j["lambda1"] = report.lambda1;
    j["lambda2"] = report.lambda2;
    j["mu_s_grid"] = report.mu_s_grid;
    j["mu_samples"] = report.mu_samples;
    j["mut_s_grid"] = report.mut_s_grid;
    j["mut_samples"] = report.mut_samples;
    write_output(opts, j.dump(2) + "\n");
    return kExitOk;
}

int run_verify(const std::string& channel_path, const std::string& prior_spec,
               const std::string& kind, int M, int n, int samples, std::uint64_t seed,
               const std::string& s_grid_spec, double r, int threads,
               const OutputOptions& opts) {
    const auto channel = cqr::load_channel_file(channel_path);
    const auto prior = resolve_prior(prior_spec, channel, /*allow_optimize=*/false);
    std::string text;
    bool pass = false;
    if (kind == "random") {
        const auto report = cqr::verify_random_coding(channel, *prior, M, n, samples, seed,
                                                      parse_s_grid(s_grid_spec), threads);
        text = cqr::report_to_json(report);
        pass = report.all_pass;
    } else if (kind == "expurgation") {
        const auto report =
            cqr::verify_expurgation(channel, *prior, M, n, samples, seed, r, threads);
        text = cqr::report_to_json(report);
        pass = report.all_pass;
    } else {
        throw cqr::ValidationError("--kind must be random or expurgation");
    }
    write_output(opts, text);
    return pass ? kExitOk : kExitVerifyFailed;
}

int run_classical(const std::string& channel_path, const std::string& prior_spec, int M,
                  int n, const std::string& s_grid_spec, bool cross_check,
                  const OutputOptions& opts) {
    const auto channel = cqr::load_classical_file(channel_path);
    // Classical files carry no embedded prior; the default is uniform.
    cqr::Prior prior = prior_spec == "uniform" || prior_spec == "file" || prior_spec.empty()
                           ? cqr::uniform_prior(channel.alphabet_size())
                           : load_prior_file(prior_spec, channel.alphabet_size());
    const std::vector<double> s_grid = parse_s_grid(s_grid_spec);

    ordered_json rows = ordered_json::array();
    double min27 = std::numeric_limits<double>::infinity();
    double min28 = std::numeric_limits<double>::infinity();
    for (double s : s_grid) {
        ordered_json row;
        row["s"] = s;
        if (s > 0.0 && s <= 1.0) {
            const double v = cqr::gallager_random_rhs(channel, prior, M, n, s);
            row["random_coding_rhs"] = v;
            min27 = std::min(min27, v);
        }
        if (s >= 1.0) {
            const double v = cqr::expurgated_classical_rhs(channel, prior, M, n, s);
            row["expurgated_rhs"] = v;
            min28 = std::min(min28, v);
        }
        rows.push_back(row);
    }

    ordered_json j;
    j["command"] = "classical";
    j["channel"] = channel_path;
    j["prior"] = prior.weights;
    j["M"] = M;
    j["n"] = n;
    j["table"] = rows;
    j["random_coding_min"] = json_extended(min27);
    j["expurgated_min"] = json_extended(min28);

    if (cross_check) {
        const auto embedded = cqr::embed_deterministic(channel);
        double deviation = 0.0;
        for (double s : s_grid) {
            if (s > 0.0 && s <= 1.0) {
                const double bracket = cqr::gallager_bracket(channel, prior, s);
                const double quantum = std::exp(-cqr::mu(embedded, prior, s));
                deviation = std::max(deviation, std::abs(bracket - quantum));
            }
            if (s >= 1.0) {
                const double classical =
                    cqr::expurgated_classical_rhs(channel, prior, M, n, s);
                const double quantum = cqr::expurgated_rhs(embedded, prior, M, n, s);
                deviation = std::max(deviation, std::abs(classical - quantum));
            }
        }
        j["cross_check_max_deviation"] = deviation;
    }
    write_output(opts, j.dump(2) + "\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reliability-function bounds for pure-state channels"};
    app.require_subcommand(1);

    OutputOptions opts;
    std::string channel_path, prior_spec = "file", format = "csv";
    std::string s_grid_spec = "0.1:1.0:0.1", kind = "random";
    double r_min = 0.0, r_max = 0.0, epsilon = 0.0, r = 1.0;
    int points = 101, M = 2, n = 1, samples = 1000, threads = 1;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_channel) {
        if (needs_channel) {
            cmd->add_option("--channel", channel_path, "channel file")->required();
        }
        cmd->add_option("--out", opts.out_path, "output path (default: stdout)");
        cmd->add_flag("--bits", opts.bits, "display rates/exponents in bits");
    };

    auto* cap = app.add_subcommand("capacity", "max-entropy capacity of the channel");
    add_common(cap, true);

    auto* zr = app.add_subcommand("zero-rate", "zero-rate reliability exponent");
    add_common(zr, true);

    auto* curve = app.add_subcommand("curve", "exponent curves on a rate grid");
    add_common(curve, true);
    curve->add_option("--prior", prior_spec, "uniform | PATH | optimize");
    curve->add_option("--rmin", r_min, "low end of the rate grid")->required();
    curve->add_option("--rmax", r_max, "high end of the rate grid")->required();
    curve->add_option("--points", points, "number of grid points");
    curve->add_option("--format", format, "csv | structured")
        ->check(CLI::IsMember({"csv", "structured"}));

    auto* binary = app.add_subcommand("binary", "closed forms for the two-state channel");
    add_common(binary, false);
    binary->add_option("--epsilon", epsilon, "overlap magnitude in (0,1)")->required();

    auto* verify = app.add_subcommand("verify", "Monte Carlo verification with exact decoding");
    add_common(verify, true);
    verify->add_option("--prior", prior_spec, "uniform | PATH");
    verify->add_option("--kind", kind, "random | expurgation");
    verify->add_option("--M", M, "number of codewords")->required();
    verify->add_option("--n", n, "block length")->required();
    verify->add_option("--samples", samples, "number of sampled codebooks")->required();
    verify->add_option("--seed", seed, "RNG seed (required; no wall-clock default)")
        ->required();
    verify->add_option("--s-grid", s_grid_spec, "lo:hi:step for the bound table");
    verify->add_option("--r", r, "expurgation moment in (0,1]");
    verify->add_option("--threads", threads, "worker count (does not change output)");

    auto* classical = app.add_subcommand("classical", "commuting-case bounds");
    add_common(classical, true);
    classical->add_option("--prior", prior_spec, "uniform | PATH");
    classical->add_option("--M", M, "number of codewords");
    classical->add_option("--n", n, "block length");
    classical->add_option("--s-grid", s_grid_spec, "lo:hi:step");
    bool cross_check = false;
    classical->add_flag("--cross-check", cross_check,
                        "compare against the pure-state embedding");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (cap->parsed()) return run_capacity(channel_path, opts);
        if (zr->parsed()) return run_zero_rate(channel_path, opts);
        if (curve->parsed()) {
            return run_curve(channel_path, prior_spec, r_min, r_max, points, format, opts);
        }
        if (binary->parsed()) return run_binary(epsilon, opts);
        if (verify->parsed()) {
            return run_verify(channel_path, prior_spec, kind, M, n, samples, seed,
                              s_grid_spec, r, threads, opts);
        }
        if (classical->parsed()) {
            return run_classical(channel_path, prior_spec, M, n, s_grid_spec, cross_check,
                                 opts);
        }
    } catch (const cqr::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const cqr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}

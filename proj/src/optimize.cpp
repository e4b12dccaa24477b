#include "cqr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace cqr {

namespace {

// f must lie above the chord through its neighbors; tolerance is relative to
// the value scale.
bool chord_violation(double x1, double f1, double x2, double f2, double x3, double f3) {
    if (x3 - x1 <= 0.0) return false;
    const double chord = ((x3 - x2) * f1 + (x2 - x1) * f3) / (x3 - x1);
    const double scale = std::max({1.0, std::abs(f1), std::abs(f2), std::abs(f3)});
    return f2 < chord - 1e-9 * scale;
}

}  // namespace

Scalar1dResult maximize_concave_1d(const std::function<double(double)>& f, double lo,
                                   double hi, double tol) {
    if (!(hi > lo)) throw ValidationError("maximize_concave_1d: empty interval");
    if (!(tol > 0.0)) throw ValidationError("maximize_concave_1d: tol must be positive");

    constexpr double kInvPhi = 0.6180339887498949;  // 1/phi
    std::map<double, double> samples;               // sorted x -> f(x)
    auto eval = [&](double x) {
        auto it = samples.find(x);
        if (it != samples.end()) return it->second;
        const double v = f(x);
        samples.emplace(x, v);
        return v;
    };

    eval(lo);
    eval(hi);
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = eval(c), fd = eval(d);

    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = eval(d);
        }
    }

    // Non-concavity shows up as sampled points dipping below the chord of
    // their neighbors.
    int violations = 0;
    auto it = samples.begin();
    if (samples.size() >= 3) {
        auto p1 = it++;
        auto p2 = it++;
        for (; it != samples.end(); ++it) {
            if (chord_violation(p1->first, p1->second, p2->first, p2->second, it->first,
                                it->second)) {
                ++violations;
            }
            p1 = p2;
            p2 = it;
        }
    }
    if (violations >= 1) {
        throw BracketFailure("maximize_concave_1d: " + std::to_string(violations) +
                             " chord-dominance violations; objective is not concave");
    }

    Scalar1dResult best{lo, samples.at(lo)};
    for (const auto& [x, v] : samples) {
        if (v > best.value) best = Scalar1dResult{x, v};
    }
    return best;
}

double default_grid_step(int alphabet_size) {
    return alphabet_size <= 3 ? 1.0 / 100.0 : 1.0 / 25.0;
}

std::vector<double> project_to_simplex(std::vector<double> x) {
    // Duchi et al. sort-based Euclidean projection.
    const std::size_t n = x.size();
    std::vector<double> u = x;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, theta = 0.0;
    int rho = 0;
    double cum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cum += u[i];
        const double t = (cum - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) {
            rho = static_cast<int>(i + 1);
            css = cum;
        }
    }
    theta = (css - 1.0) / static_cast<double>(rho);
    double sum = 0.0;
    for (auto& v : x) {
        v = std::max(v - theta, 0.0);
        sum += v;
    }
    if (sum <= 0.0) {
        std::fill(x.begin(), x.end(), 1.0 / static_cast<double>(n));
        return x;
    }
    for (auto& v : x) v /= sum;
    return x;
}

namespace {

struct Candidate {
    std::vector<double> point;
    double value;  // in maximize orientation
};

void enumerate_lattice(int a, int k, std::vector<int>& partial,
                       const std::function<void(const std::vector<int>&)>& emit) {
    if (static_cast<int>(partial.size()) == a - 1) {
        int used = 0;
        for (int m : partial) used += m;
        partial.push_back(k - used);
        emit(partial);
        partial.pop_back();
        return;
    }
    int used = 0;
    for (int m : partial) used += m;
    for (int m = 0; m <= k - used; ++m) {
        partial.push_back(m);
        enumerate_lattice(a, k, partial, emit);
        partial.pop_back();
    }
}

// Nelder-Mead restricted to the simplex: every trial point is projected
// before evaluation. Returns the best projected point seen.
Candidate nelder_mead_on_simplex(const std::function<double(const std::vector<double>&)>& f,
                                 const std::vector<double>& seed, double scale) {
    const int a = static_cast<int>(seed.size());
    const int nv = a;  // a vertices span the (a-1)-dim simplex tangent space

    struct Vertex {
        std::vector<double> x;
        double fx;
    };
    std::vector<Vertex> poly;
    poly.reserve(static_cast<std::size_t>(nv));

    Candidate best{seed, f(seed)};
    auto eval = [&](std::vector<double> x) {
        x = project_to_simplex(std::move(x));
        const double v = f(x);
        if (v > best.value) best = Candidate{x, v};
        return Vertex{std::move(x), v};
    };

    poly.push_back(Vertex{seed, best.value});
    for (int i = 1; i < nv; ++i) {
        std::vector<double> x = seed;
        x[static_cast<std::size_t>(i)] += scale;
        x[static_cast<std::size_t>(i - 1)] -= scale;
        poly.push_back(eval(std::move(x)));
    }

    auto order = [&] {
        std::sort(poly.begin(), poly.end(), [](const Vertex& l, const Vertex& r) {
            if (l.fx != r.fx) return l.fx > r.fx;  // descending: best first
            return l.x < r.x;
        });
    };

    constexpr int kMaxIter = 500;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        order();
        double diameter = 0.0;
        for (int i = 1; i < nv; ++i) {
            double d = 0.0;
            for (int j = 0; j < a; ++j) {
                d = std::max(d, std::abs(poly[static_cast<std::size_t>(i)].x[static_cast<std::size_t>(j)] -
                                         poly[0].x[static_cast<std::size_t>(j)]));
            }
            diameter = std::max(diameter, d);
        }
        if (diameter < 1e-10) break;

        const Vertex& worst = poly.back();
        std::vector<double> centroid(static_cast<std::size_t>(a), 0.0);
        for (int i = 0; i < nv - 1; ++i) {
            for (int j = 0; j < a; ++j) {
                centroid[static_cast<std::size_t>(j)] +=
                    poly[static_cast<std::size_t>(i)].x[static_cast<std::size_t>(j)] /
                    static_cast<double>(nv - 1);
            }
        }
        auto blend = [&](double t) {
            std::vector<double> x(static_cast<std::size_t>(a));
            for (int j = 0; j < a; ++j) {
                x[static_cast<std::size_t>(j)] = centroid[static_cast<std::size_t>(j)] +
                                                 t * (centroid[static_cast<std::size_t>(j)] -
                                                      worst.x[static_cast<std::size_t>(j)]);
            }
            return x;
        };

        Vertex reflected = eval(blend(1.0));
        if (reflected.fx > poly[0].fx) {
            Vertex expanded = eval(blend(2.0));
            poly.back() = expanded.fx > reflected.fx ? expanded : reflected;
            continue;
        }
        if (reflected.fx > poly[static_cast<std::size_t>(nv - 2)].fx) {
            poly.back() = reflected;
            continue;
        }
        Vertex contracted = eval(blend(-0.5));
        if (contracted.fx > worst.fx) {
            poly.back() = contracted;
            continue;
        }
        // Shrink toward the best vertex.
        for (int i = 1; i < nv; ++i) {
            std::vector<double> x(static_cast<std::size_t>(a));
            for (int j = 0; j < a; ++j) {
                x[static_cast<std::size_t>(j)] =
                    0.5 * (poly[0].x[static_cast<std::size_t>(j)] +
                           poly[static_cast<std::size_t>(i)].x[static_cast<std::size_t>(j)]);
            }
            poly[static_cast<std::size_t>(i)] = eval(std::move(x));
        }
    }
    return best;
}

}  // namespace

SimplexResult optimize_simplex(const std::function<double(const std::vector<double>&)>& objective,
                               int alphabet_size, OptMode mode, double grid_step) {
    if (alphabet_size < 1) throw ValidationError("optimize_simplex: alphabet size must be >= 1");
    if (alphabet_size > 6) {
        throw DimensionTooLarge("optimize_simplex: alphabet size " +
                                std::to_string(alphabet_size) + " exceeds cap 6");
    }
    if (!(grid_step > 0.0) || grid_step > 0.5) {
        throw ValidationError("optimize_simplex: grid_step must lie in (0, 1/2]");
    }

    const double sign = mode == OptMode::Maximize ? 1.0 : -1.0;
    auto oriented = [&](const std::vector<double>& x) { return sign * objective(x); };

    if (alphabet_size == 1) {
        std::vector<double> point{1.0};
        const double v = objective(point);
        return SimplexResult{std::move(point), v};
    }

    const int k = std::max(1, static_cast<int>(std::lround(1.0 / grid_step)));

    // Lattice enumeration is in lexicographic order and improvement is
    // strict, so the first (lexicographically smallest) of tied points wins.
    constexpr std::size_t kSeeds = 5;
    std::vector<Candidate> top;
    std::vector<int> partial;
    enumerate_lattice(alphabet_size, k, partial, [&](const std::vector<int>& m) {
        std::vector<double> p(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            p[i] = static_cast<double>(m[i]) / static_cast<double>(k);
        }
        const double v = oriented(p);
        if (top.size() < kSeeds || v > top.back().value) {
            Candidate c{std::move(p), v};
            auto pos = std::upper_bound(top.begin(), top.end(), c,
                                        [](const Candidate& l, const Candidate& r) {
                                            return l.value > r.value;
                                        });
            top.insert(pos, std::move(c));
            if (top.size() > kSeeds) top.pop_back();
        }
    });

    Candidate best = top.front();
    // The zero-rate quadratic can be multi-modal over the simplex, so refine
    // from several seeds, not just the champion.
    const double nm_scale = std::max(grid_step / 2.0, 1e-3);
    for (const Candidate& seed : top) {
        if (!std::isfinite(seed.value)) continue;
        Candidate refined = nelder_mead_on_simplex(oriented, seed.point, nm_scale);
        if (refined.value > best.value) best = refined;
    }

    best.point = project_to_simplex(std::move(best.point));
    return SimplexResult{std::move(best.point), sign * best.value};
}

SimplexResult optimize_simplex(const std::function<double(const std::vector<double>&)>& objective,
                               int alphabet_size, OptMode mode) {
    return optimize_simplex(objective, alphabet_size, mode, default_grid_step(alphabet_size));
}

}  // namespace cqr

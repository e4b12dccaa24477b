// One-dimensional concave maximization and small-alphabet simplex
// optimization. Deterministic: no randomized restarts, ties between lattice
// points broken by lexicographic order.
#pragma once

#include <functional>
#include <vector>

#include "cqr/errors.hpp"

namespace cqr {

struct Scalar1dResult {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section search for the maximum of a concave f on [lo, hi], shrinking
// until the interval width is <= tol. Returns the best sampled point, which
// is an endpoint when the maximum sits on the boundary. Throws BracketFailure
// when the samples reveal non-concavity beyond 1e-9 (a consecutive triple of
// sampled points violating chord dominance).
Scalar1dResult maximize_concave_1d(const std::function<double(double)>& f, double lo,
                                   double hi, double tol);

enum class OptMode { Maximize, Minimize };

struct SimplexResult {
    std::vector<double> point;  // on the probability simplex, renormalized exactly
    double value = 0.0;
};

// Default lattice resolution: 1/100 for a <= 3, 1/25 for a in {4,5,6}.
double default_grid_step(int alphabet_size);

// Exhaustive simplex-lattice scan at resolution grid_step, followed by
// Nelder-Mead refinement (projected to the simplex) from the five best
// lattice points. The result is never worse than the best lattice point.
// Throws DimensionTooLarge for alphabet_size > 6.
SimplexResult optimize_simplex(const std::function<double(const std::vector<double>&)>& objective,
                               int alphabet_size, OptMode mode, double grid_step);

SimplexResult optimize_simplex(const std::function<double(const std::vector<double>&)>& objective,
                               int alphabet_size, OptMode mode);

// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::vector<double> x);

}  // namespace cqr

#include "cqr/hermitian.hpp"

#include <algorithm>
#include <cmath>

namespace cqr {

bool is_hermitian(const Matrix& h, double tol) {
    if (h.rows() != h.cols()) return false;
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        for (Eigen::Index j = i; j < h.cols(); ++j) {
            if (std::abs(h(i, j) - std::conj(h(j, i))) > tol) return false;
        }
    }
    return true;
}

EigenSystem eig_hermitian(const Matrix& h) {
    if (h.rows() != h.cols()) {
        throw NonHermitianInput("eig_hermitian: matrix is not square");
    }
    if (!is_hermitian(h)) {
        throw NonHermitianInput("eig_hermitian: symmetry tolerance violated");
    }
    // Symmetrize before solving so roundoff in the strict upper triangle
    // cannot leak into the result.
    Matrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eig_hermitian: eigensolver failed to converge");
    }
    return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

PsdSqrtResult psd_sqrt(const Matrix& h, double clamp_tol) {
    EigenSystem es = eig_hermitian(h);
    const Eigen::Index n = es.eigenvalues.size();
    const double largest = n > 0 ? es.eigenvalues(n - 1) : 0.0;
    const double scale = std::max(std::abs(largest), 1.0);
    const double window = clamp_tol * scale;

    PsdSqrtResult result;
    Eigen::VectorXd sqrt_vals(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lambda = es.eigenvalues(i);
        if (lambda < -window) {
            throw NotPSD("psd_sqrt: eigenvalue " + std::to_string(lambda) +
                         " below clamp window " + std::to_string(-window));
        }
        if (lambda < window) {
            if (lambda != 0.0) result.clamped.push_back(lambda);
            sqrt_vals(i) = 0.0;
        } else {
            sqrt_vals(i) = std::sqrt(lambda);
        }
    }
    result.root = es.eigenvectors * sqrt_vals.asDiagonal() * es.eigenvectors.adjoint();
    // Force exact Hermitian symmetry of the product.
    result.root = 0.5 * (result.root + result.root.adjoint().eval());
    return result;
}

GramDiagnostics validate_gram(const Matrix& g) {
    GramDiagnostics d;
    d.hermitian = is_hermitian(g);

    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        d.max_diag_deviation =
            std::max(d.max_diag_deviation, std::abs(g(i, i) - Complex(1.0, 0.0)));
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            if (i != j) {
                d.max_offdiag_magnitude = std::max(d.max_offdiag_magnitude, std::abs(g(i, j)));
            }
        }
    }
    d.unit_diagonal = d.max_diag_deviation <= 1e-9;
    d.overlaps_bounded = d.max_offdiag_magnitude <= 1.0 + 1e-9;

    if (d.hermitian && g.rows() == g.cols() && g.rows() > 0) {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (g + g.adjoint()));
        if (solver.info() == Eigen::Success) {
            d.min_eigenvalue = solver.eigenvalues()(0);
            d.psd = d.min_eigenvalue >= -1e-10;
        }
    }
    return d;
}

}  // namespace cqr

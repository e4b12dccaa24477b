// Dense numerical kernels on complex Hermitian matrices: eigendecomposition,
// positive-semidefinite square root with eigenvalue clamping, and Gram-matrix
// validation. Dimensions are desk scale (alphabet, Hilbert space, or codebook
// size); everything is dense.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cqr/errors.hpp"

namespace cqr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Max |H(i,j) - conj(H(j,i))| allowed before an input is rejected.
inline constexpr double kHermitianTol = 1e-12;

struct EigenSystem {
    Eigen::VectorXd eigenvalues;  // sorted ascending
    Matrix eigenvectors;          // orthonormal columns, same order
};

struct PsdSqrtResult {
    Matrix root;                  // Hermitian PSD square root of the clamped input
    std::vector<double> clamped;  // eigenvalues that were snapped to zero
};

struct GramDiagnostics {
    bool hermitian = false;
    bool psd = false;
    bool unit_diagonal = false;
    bool overlaps_bounded = false;
    double min_eigenvalue = 0.0;
    double max_diag_deviation = 0.0;
    double max_offdiag_magnitude = 0.0;

    bool valid() const { return hermitian && psd && unit_diagonal && overlaps_bounded; }
};

bool is_hermitian(const Matrix& h, double tol = kHermitianTol);

// Spectral decomposition of a Hermitian matrix.
// Throws NonHermitianInput when the symmetry tolerance is violated.
EigenSystem eig_hermitian(const Matrix& h);

// PSD square root with clamping. Eigenvalues below clamp_tol * scale are set
// to zero, where scale = max(|lambda_max|, 1); eigenvalues below
// -clamp_tol * scale are a hard NotPSD error. Gram matrices of near-collinear
// codewords are numerically semi-definite, which is what the window absorbs.
PsdSqrtResult psd_sqrt(const Matrix& h, double clamp_tol = 1e-12);

// Pure diagnostic: Hermitian / PSD / unit diagonal / |G_ij| <= 1 checks for a
// candidate Gram matrix. Never throws.
GramDiagnostics validate_gram(const Matrix& g);

}  // namespace cqr

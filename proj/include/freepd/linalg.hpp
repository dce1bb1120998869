#pragma once

#include <complex>

#include <Eigen/Dense>

namespace freepd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Relative tolerances used throughout. Both must be strictly positive.
struct Tolerance {
    /// Eigenvalue floor for PSD tests, relative to max(1, ||A||_2).
    double psd_eps = 1e-10;
    /// Singular-value cutoff for ranks and pseudo-inverses, relative to ||A||_2.
    double rank_eps = 1e-10;

    void validate() const;
};

struct EigenDecomposition {
    RealVector values; ///< descending
    Matrix vectors;    ///< unitary, columns match `values`
};

/// Cyclic Jacobi eigensolver for Hermitian matrices. The sweep order is fixed,
/// so results are reproducible bit-for-bit on a given build.
///
/// Throws InputError for non-finite or non-Hermitian input (relative asymmetry
/// above 1e-12) and MathError if the sweep limit is reached.
EigenDecomposition eig_hermitian(const Matrix& a);

/// Same, starting from the approximate eigenbasis `warm_start` (square,
/// near-unitary; re-orthonormalized before use). Converges in very few sweeps
/// when `a` is close to a matrix diagonalized by `warm_start`.
EigenDecomposition eig_hermitian(const Matrix& a, const Matrix& warm_start);

bool is_hermitian(const Matrix& a, double rel = 1e-12);
bool is_finite(const Matrix& a);

/// Largest singular value.
double spectral_norm(const Matrix& a);
double min_eigenvalue(const Matrix& a);

/// min eigenvalue >= -psd_eps * max(1, ||A||_2).
bool is_psd(const Matrix& a, const Tolerance& tol = {});

/// W with A = W* W; W has rank(A) rows. Columns of W are the realization
/// vectors of the Gram matrix A. Throws NotPositiveError when A is not PSD.
Matrix gram_factor(const Matrix& a, const Tolerance& tol = {});

/// Moore-Penrose pseudo-inverse of an arbitrary (rectangular) matrix,
/// singular values below rank_eps * sigma_max are treated as zero.
Matrix pinv(const Matrix& a, const Tolerance& tol = {});

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
Matrix psd_project(const Matrix& a);

/// Hermitian part (A + A*) / 2.
Matrix hermitian_part(const Matrix& a);

} // namespace freepd

#include "freepd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "freepd/error.hpp"

namespace freepd {

namespace {

constexpr int kMaxSweeps = 100;

double max_abs(const Matrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

void require_hermitian(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw InputError("expected a square matrix, got " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    if (!is_finite(a)) {
        throw InputError("matrix has non-finite entries");
    }
    if (!is_hermitian(a)) {
        throw InputError("matrix is not Hermitian");
    }
}

// Applies cyclic Jacobi rotations to the Hermitian matrix `a` until it is
// diagonal to working precision, accumulating the rotations into `v`.
void jacobi_sweeps(Matrix& a, Matrix& v) {
    const Eigen::Index n = a.rows();
    const double eps = std::numeric_limits<double>::epsilon();
    const double norm = a.norm();
    if (n < 2 || norm == 0.0) {
        return;
    }
    const double drop = eps * norm / static_cast<double>(n);

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index q = 1; q < n; ++q) {
            for (Eigen::Index p = 0; p < q; ++p) {
                off += std::norm(a(p, q));
            }
        }
        if (std::sqrt(off) <= eps * norm) {
            return;
        }

        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= drop) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const Complex phase = apq / mag;
                const Complex sp = s * phase;
                const Complex sc = s * std::conj(phase);

                for (Eigen::Index i = 0; i < n; ++i) {
                    const Complex aip = a(i, p);
                    const Complex aiq = a(i, q);
                    a(i, p) = c * aip - sc * aiq;
                    a(i, q) = sp * aip + c * aiq;
                }
                for (Eigen::Index j = 0; j < n; ++j) {
                    const Complex apj = a(p, j);
                    const Complex aqj = a(q, j);
                    a(p, j) = c * apj - sp * aqj;
                    a(q, j) = sc * apj + c * aqj;
                }
                a(p, p) = app - t * mag;
                a(q, q) = aqq + t * mag;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                for (Eigen::Index i = 0; i < v.rows(); ++i) {
                    const Complex vip = v(i, p);
                    const Complex viq = v(i, q);
                    v(i, p) = c * vip - sc * viq;
                    v(i, q) = sp * vip + c * viq;
                }
            }
        }
    }
    throw MathError("Jacobi eigensolver did not converge in " + std::to_string(kMaxSweeps) + " sweeps");
}

EigenDecomposition sorted(const Matrix& diag, const Matrix& v) {
    const Eigen::Index n = diag.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return diag(i, i).real() > diag(j, j).real(); });

    EigenDecomposition out{RealVector(n), Matrix(v.rows(), n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = diag(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
        out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

// Modified Gram-Schmidt on the columns; columns that collapse are replaced by
// unit vectors orthogonalized against the rest.
Matrix orthonormalize(const Matrix& q0) {
    Matrix q = q0;
    const Eigen::Index n = q.cols();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index i = 0; i < j; ++i) {
                q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
            }
        }
        double nrm = q.col(j).norm();
        if (nrm < 1e-8) {
            for (Eigen::Index e = 0; e < q.rows() && nrm < 0.5; ++e) {
                q.col(j).setZero();
                q(e, j) = 1.0;
                for (Eigen::Index i = 0; i < j; ++i) {
                    q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
                }
                nrm = q.col(j).norm();
            }
        }
        q.col(j) /= nrm;
    }
    return q;
}

} // namespace

void Tolerance::validate() const {
    if (!(psd_eps > 0.0) || !(rank_eps > 0.0)) {
        throw InputError("tolerances must be strictly positive");
    }
}

bool is_finite(const Matrix& a) {
    return a.allFinite();
}

bool is_hermitian(const Matrix& a, double rel) {
    if (a.rows() != a.cols()) {
        return false;
    }
    const double scale = max_abs(a);
    const double asym = max_abs(a - a.adjoint());
    return asym <= rel * scale;
}

Matrix hermitian_part(const Matrix& a) {
    return 0.5 * (a + a.adjoint());
}

EigenDecomposition eig_hermitian(const Matrix& a) {
    require_hermitian(a);
    Matrix work = hermitian_part(a);
    Matrix v = Matrix::Identity(a.rows(), a.cols());
    jacobi_sweeps(work, v);
    return sorted(work, v);
}

EigenDecomposition eig_hermitian(const Matrix& a, const Matrix& warm_start) {
    require_hermitian(a);
    if (warm_start.rows() != a.rows() || warm_start.cols() != a.cols()) {
        throw InputError("warm start basis has the wrong shape");
    }
    Matrix v = orthonormalize(warm_start);
    Matrix work = hermitian_part(v.adjoint() * a * v);
    jacobi_sweeps(work, v);
    return sorted(work, v);
}

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    const Matrix g = a.rows() <= a.cols() ? Matrix(a * a.adjoint()) : Matrix(a.adjoint() * a);
    EigenDecomposition e = eig_hermitian(hermitian_part(g));
    return std::sqrt(std::max(0.0, e.values(0)));
}

double min_eigenvalue(const Matrix& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    return eig_hermitian(a).values.tail(1)(0);
}

namespace {

double psd_floor(const RealVector& values, const Tolerance& tol) {
    const double norm = std::max(std::abs(values(0)), std::abs(values(values.size() - 1)));
    return -tol.psd_eps * std::max(1.0, norm);
}

} // namespace

bool is_psd(const Matrix& a, const Tolerance& tol) {
    tol.validate();
    if (a.size() == 0) {
        return true;
    }
    EigenDecomposition e = eig_hermitian(a);
    return e.values(e.values.size() - 1) >= psd_floor(e.values, tol);
}

Matrix gram_factor(const Matrix& a, const Tolerance& tol) {
    tol.validate();
    if (a.size() == 0) {
        return Matrix(0, a.cols());
    }
    EigenDecomposition e = eig_hermitian(a);
    const double lowest = e.values(e.values.size() - 1);
    if (lowest < psd_floor(e.values, tol)) {
        throw NotPositiveError("gram_factor: matrix is not positive semidefinite", "", lowest);
    }
    const double cutoff = tol.rank_eps * std::max(0.0, e.values(0));
    Eigen::Index rank = 0;
    while (rank < e.values.size() && e.values(rank) > cutoff) {
        ++rank;
    }
    Matrix w(rank, a.cols());
    for (Eigen::Index i = 0; i < rank; ++i) {
        w.row(i) = std::sqrt(e.values(i)) * e.vectors.col(i).adjoint();
    }
    return w;
}

Matrix pinv(const Matrix& a, const Tolerance& tol) {
    tol.validate();
    if (!is_finite(a)) {
        throw InputError("pinv: matrix has non-finite entries");
    }
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    Matrix out = Matrix::Zero(n, m);
    if (a.size() == 0) {
        return out;
    }

    if (m == n && is_hermitian(a)) {
        EigenDecomposition e = eig_hermitian(a);
        const double top = e.values.cwiseAbs().maxCoeff();
        const double cutoff = tol.rank_eps * top;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(e.values(i)) > cutoff && top > 0.0) {
                out += (1.0 / e.values(i)) * e.vectors.col(i) * e.vectors.col(i).adjoint();
            }
        }
        return out;
    }

    // Hermitian dilation [[0, A], [A*, 0]] has eigenvalues +-sigma_i with
    // eigenvectors (u_i, v_i) / sqrt(2).
    Matrix dilation = Matrix::Zero(m + n, m + n);
    dilation.topRightCorner(m, n) = a;
    dilation.bottomLeftCorner(n, m) = a.adjoint();
    EigenDecomposition e = eig_hermitian(dilation);
    const double top = e.values(0);
    if (top <= 0.0) {
        return out;
    }
    const double cutoff = tol.rank_eps * top;
    for (Eigen::Index i = 0; i < e.values.size() && e.values(i) > cutoff; ++i) {
        const auto u = e.vectors.col(i).head(m);
        const auto v = e.vectors.col(i).tail(n);
        out += (2.0 / e.values(i)) * v * u.adjoint();
    }
    return out;
}

Matrix psd_project(const Matrix& a) {
    if (a.size() == 0) {
        return a;
    }
    EigenDecomposition e = eig_hermitian(a);
    const RealVector clipped = e.values.cwiseMax(0.0);
    return hermitian_part(e.vectors * clipped.asDiagonal() * e.vectors.adjoint());
}

} // namespace freepd

#include "freepd/completion.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "freepd/error.hpp"

namespace freepd {

namespace {

using Index = Eigen::Index;

Matrix gather(const Matrix& a, std::size_t k, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    const auto kk = static_cast<Index>(k);
    Matrix out(static_cast<Index>(rows.size()) * kk, static_cast<Index>(cols.size()) * kk);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            out.block(static_cast<Index>(i) * kk, static_cast<Index>(j) * kk, kk, kk) =
                a.block(static_cast<Index>(rows[i]) * kk, static_cast<Index>(cols[j]) * kk, kk, kk);
        }
    }
    return out;
}

std::string index_list(const std::vector<std::size_t>& idx) {
    std::string s = "{";
    for (std::size_t i = 0; i < idx.size(); ++i) {
        s += (i ? "," : "") + std::to_string(idx[i]);
    }
    return s + "}";
}

// F with F*F = s, keeping eigenvalues above `cutoff`.
Matrix defect_factor(const Matrix& s, double cutoff) {
    EigenDecomposition e = eig_hermitian(hermitian_part(s));
    Index rank = 0;
    while (rank < e.values.size() && e.values(rank) > cutoff) {
        ++rank;
    }
    Matrix f(rank, s.cols());
    for (Index i = 0; i < rank; ++i) {
        // phase fixed so the largest component is real positive
        Index top = 0;
        e.vectors.col(i).cwiseAbs().maxCoeff(&top);
        const Complex z = e.vectors(top, i);
        f.row(i) = std::sqrt(e.values(i)) * (e.vectors.col(i) * (std::abs(z) / z)).adjoint();
    }
    return f;
}

} // namespace

PartialBlockMatrix::PartialBlockMatrix(Matrix entries, std::size_t block_size, std::size_t missing_row, std::size_t missing_col)
    : entries_(std::move(entries)), k_(block_size), row_(missing_row), col_(missing_col) {
    if (k_ == 0 || entries_.rows() != entries_.cols() || entries_.rows() % static_cast<Index>(k_) != 0) {
        throw InputError("partial matrix: entries must be square with a whole number of k x k blocks");
    }
    p_ = static_cast<std::size_t>(entries_.rows()) / k_;
    if (row_ >= p_ || col_ >= p_ || row_ == col_) {
        throw InputError("partial matrix: missing pair must be two distinct valid indices");
    }
    const auto kk = static_cast<Index>(k_);
    entries_.block(static_cast<Index>(row_) * kk, static_cast<Index>(col_) * kk, kk, kk).setZero();
    entries_.block(static_cast<Index>(col_) * kk, static_cast<Index>(row_) * kk, kk, kk).setZero();
    if (!is_finite(entries_)) {
        throw InputError("partial matrix: non-finite entries");
    }
    if (!is_hermitian(entries_)) {
        throw InputError("partial matrix: known blocks are not Hermitian");
    }
}

Matrix PartialBlockMatrix::block(std::size_t i, std::size_t j) const {
    const auto kk = static_cast<Index>(k_);
    return entries_.block(static_cast<Index>(i) * kk, static_cast<Index>(j) * kk, kk, kk);
}

Matrix PartialBlockMatrix::completed_with(const Matrix& filled) const {
    const auto kk = static_cast<Index>(k_);
    if (filled.rows() != kk || filled.cols() != kk) {
        throw InputError("partial matrix: filled block has the wrong shape");
    }
    Matrix full = entries_;
    full.block(static_cast<Index>(row_) * kk, static_cast<Index>(col_) * kk, kk, kk) = filled;
    full.block(static_cast<Index>(col_) * kk, static_cast<Index>(row_) * kk, kk, kk) = filled.adjoint();
    return full;
}

ContractionParam::ContractionParam(Matrix gamma) : gamma_(std::move(gamma)) {
    if (!is_finite(gamma_)) {
        throw InputError("contraction has non-finite entries");
    }
    const double n = spectral_norm(gamma_);
    if (n > 1.0 + 1e-12) {
        throw MathError("parameter is not a contraction (norm " + std::to_string(n) + ")");
    }
}

ContractionParam ContractionParam::zero(std::size_t rows, std::size_t cols) {
    return ContractionParam(Matrix::Zero(static_cast<Index>(rows), static_cast<Index>(cols)));
}

DefectData analyze(const PartialBlockMatrix& p, const Tolerance& tol) {
    tol.validate();
    const std::size_t n = p.size();
    const std::size_t k = p.block_size();
    const std::size_t kr = p.missing_row();
    const std::size_t kc = p.missing_col();
    const Matrix full = p.completed_with(Matrix::Zero(static_cast<Index>(k), static_cast<Index>(k)));

    std::vector<std::size_t> known;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != kr && i != kc) {
            known.push_back(i);
        }
    }

    // Every fully specified principal submatrix sits inside one of these two.
    for (std::size_t dropped : {kr, kc}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != dropped) {
                idx.push_back(i);
            }
        }
        const Matrix sub = gather(full, k, idx, idx);
        if (!is_psd(sub, tol)) {
            throw NotPositiveError("partial matrix is not partially positive", "principal submatrix " + index_list(idx),
                                   min_eigenvalue(sub));
        }
    }

    const Matrix a_rr = gather(full, k, {kr}, {kr});
    const Matrix a_cc = gather(full, k, {kc}, {kc});
    DefectData d;
    Matrix schur_row = a_rr;
    Matrix schur_col = a_cc;
    if (known.empty()) {
        d.central_entry = Matrix::Zero(static_cast<Index>(k), static_cast<Index>(k));
    } else {
        const Matrix a_ee = gather(full, k, known, known);
        const Matrix a_re = gather(full, k, {kr}, known);
        const Matrix a_ec = gather(full, k, known, {kc});
        const Matrix a_ee_pinv = pinv(hermitian_part(a_ee), tol);
        d.central_entry = a_re * a_ee_pinv * a_ec;
        schur_row -= a_re * a_ee_pinv * a_re.adjoint();
        schur_col -= a_ec.adjoint() * a_ee_pinv * a_ec;
    }
    d.defect_row = defect_factor(schur_row, tol.rank_eps * std::max(1.0, spectral_norm(a_rr)));
    d.defect_col = defect_factor(schur_col, tol.rank_eps * std::max(1.0, spectral_norm(a_cc)));
    return d;
}

Matrix completed_entry(const DefectData& d, const ContractionParam& gamma) {
    if (gamma.rows() != static_cast<std::size_t>(d.defect_row.rows()) || gamma.cols() != static_cast<std::size_t>(d.defect_col.rows())) {
        throw InputError("contraction is " + std::to_string(gamma.rows()) + "x" + std::to_string(gamma.cols()) + ", defects need " +
                         std::to_string(d.defect_row.rows()) + "x" + std::to_string(d.defect_col.rows()));
    }
    if (gamma.rows() == 0 || gamma.cols() == 0) {
        return d.central_entry;
    }
    return d.central_entry + d.defect_row.adjoint() * gamma.matrix() * d.defect_col;
}

Matrix complete(const PartialBlockMatrix& p, const ContractionParam& gamma, const Tolerance& tol) {
    return p.completed_with(completed_entry(analyze(p, tol), gamma));
}

ContractionParam extract_gamma(const DefectData& d, const Matrix& filled, const Tolerance& tol) {
    const Index dr = d.defect_row.rows();
    const Index dc = d.defect_col.rows();
    if (dr == 0 || dc == 0) {
        return ContractionParam::zero(static_cast<std::size_t>(dr), static_cast<std::size_t>(dc));
    }
    Matrix gamma = pinv(d.defect_row.adjoint(), tol) * (filled - d.central_entry) * pinv(d.defect_col, tol);
    const double n = spectral_norm(gamma);
    if (n > 1.0 + 1e-6) {
        throw MathError("extracted parameter has norm " + std::to_string(n) + " > 1");
    }
    if (n > 1.0) {
        gamma /= n;
    }
    return ContractionParam(std::move(gamma));
}

ContractionParam extract_gamma(const PartialBlockMatrix& p, const Matrix& filled, const Tolerance& tol) {
    const Matrix full = p.completed_with(filled);
    if (!is_psd(full, tol)) {
        throw NotPositiveError("extract_gamma: completion is not positive semidefinite", "completed matrix", min_eigenvalue(full));
    }
    return extract_gamma(analyze(p, tol), filled, tol);
}

} // namespace freepd

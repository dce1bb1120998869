#pragma once

#include <cstddef>

#include "freepd/linalg.hpp"

namespace freepd {

/// p x p block matrix (blocks k x k) with exactly one unknown pair of
/// off-diagonal blocks, (row, col) and (col, row).
class PartialBlockMatrix {
public:
    /// `entries` holds all blocks; the two blocks of the missing pair are
    /// ignored. The known part must be Hermitian.
    PartialBlockMatrix(Matrix entries, std::size_t block_size, std::size_t missing_row, std::size_t missing_col);

    std::size_t size() const noexcept { return p_; }
    std::size_t block_size() const noexcept { return k_; }
    std::size_t missing_row() const noexcept { return row_; }
    std::size_t missing_col() const noexcept { return col_; }

    Matrix block(std::size_t i, std::size_t j) const;

    /// The full matrix with block (row, col) = filled and (col, row) = filled*.
    Matrix completed_with(const Matrix& filled) const;

private:
    Matrix entries_;
    std::size_t k_;
    std::size_t p_;
    std::size_t row_;
    std::size_t col_;
};

/// Data of a one-entry completion problem. With E the known indices, the
/// completions are exactly
///     A(row, col) = central_entry + defect_row* gamma defect_col,
/// gamma ranging over contractions of size defect_row.rows() x defect_col.rows().
struct DefectData {
    Matrix central_entry; ///< A(row,E) A(E,E)^+ A(E,col), k x k
    Matrix defect_row;    ///< d_k x k, F*F = Schur complement of the row index against E
    Matrix defect_col;    ///< d_l x k, same for the column index
};

/// A matrix of operator norm at most 1 (checked with slack 1e-12).
class ContractionParam {
public:
    explicit ContractionParam(Matrix gamma);
    static ContractionParam zero(std::size_t rows, std::size_t cols);

    const Matrix& matrix() const noexcept { return gamma_; }
    std::size_t rows() const noexcept { return static_cast<std::size_t>(gamma_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(gamma_.cols()); }
    double norm() const { return spectral_norm(gamma_); }

private:
    Matrix gamma_;
};

/// Throws NotPositiveError if a fully specified principal submatrix is not PSD.
DefectData analyze(const PartialBlockMatrix& p, const Tolerance& tol = {});

/// central_entry + defect_row* gamma defect_col. InputError on shape mismatch.
Matrix completed_entry(const DefectData& d, const ContractionParam& gamma);

/// The full PSD completion for `gamma`.
Matrix complete(const PartialBlockMatrix& p, const ContractionParam& gamma, const Tolerance& tol = {});

/// The contraction producing `filled` (pseudo-inverse of the defect factors;
/// components outside their ranges are dropped). NotPositiveError if the
/// completion with `filled` is not PSD.
ContractionParam extract_gamma(const PartialBlockMatrix& p, const Matrix& filled, const Tolerance& tol = {});

/// Variant reusing an earlier analyze() of the same problem; the PSD check of
/// the completed matrix is skipped.
ContractionParam extract_gamma(const DefectData& d, const Matrix& filled, const Tolerance& tol = {});

} // namespace freepd

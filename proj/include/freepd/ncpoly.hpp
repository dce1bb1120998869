#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "freepd/linalg.hpp"
#include "freepd/words.hpp"

namespace freepd {

/// p(X) = sum_s A_s X(s) with c x c coefficient blocks, X(s) the product of
/// unitary indeterminates along s.
class NcPolynomial {
public:
    NcPolynomial(GroupContext ctx, std::size_t c, std::map<Word, Matrix> terms);

    static NcPolynomial constant(const GroupContext& ctx, const Matrix& value);

    const GroupContext& context() const noexcept { return ctx_; }
    std::size_t c() const noexcept { return c_; }
    const std::map<Word, Matrix>& terms() const noexcept { return terms_; }

    /// A_s, zero when s is not in the support.
    Matrix coefficient(const Word& s) const;

    /// Largest word length in the support (0 for the zero polynomial).
    std::size_t degree() const;

    /// A_{s^-1} = A_s* for every s, within `rel` of the largest coefficient entry.
    bool is_hermitian(double rel = 1e-12) const;

private:
    GroupContext ctx_;
    std::size_t c_;
    std::map<Word, Matrix> terms_;
};

NcPolynomial nc_mul(const NcPolynomial& p, const NcPolynomial& q);
NcPolynomial nc_adjoint(const NcPolynomial& p);
NcPolynomial nc_add(const NcPolynomial& p, const NcPolynomial& q);

/// max_x max |entry| of the coefficients of p - q.
double coefficient_distance(const NcPolynomial& p, const NcPolynomial& q);

/// sum_s A_s (kron) U(s). `unitaries` holds U_1, ..., U_m, all d x d and
/// unitary within 1e-10.
Matrix eval_unitaries(const NcPolynomial& p, std::span<const Matrix> unitaries);

/// Haar-distributed d x d unitary (QR of a complex Gaussian matrix, phases fixed).
Matrix haar_unitary(std::size_t d, std::mt19937_64& rng);

struct SampleReport {
    double min_eigenvalue = 0.0;
    std::size_t trial = 0;     ///< trial attaining the minimum
    std::size_t dimension = 0; ///< size of its unitaries
};

/// Minimum eigenvalue of p(U) over `trials` Haar-random tuples; trial i uses
/// unitaries of size 1 + (i mod d_max). A clearly negative value disproves
/// positivity; a nonnegative one is only evidence.
SampleReport sample_positivity(const NcPolynomial& p, std::size_t trials, std::size_t d_max, std::uint64_t seed);

struct SosOptions {
    double tol = 1e-8;
    std::size_t max_iter = 20000;
    /// Gram index S_D. Unset: D = ceil(deg/2) first, then D = deg if that fails.
    std::optional<std::size_t> index_degree;
    /// Refine the Dykstra iterate by Levenberg-Marquardt on a low-rank factor
    /// when the iteration alone misses `tol`.
    bool polish = true;
};

/// p = sum_{s,t} B_s* B_t X(s^-1 t), with B_s the column blocks of `factor`.
struct SosCertificate {
    GroupContext ctx;
    std::size_t c = 1;
    std::vector<Word> index; ///< S_D in lexicographic order
    Matrix gram;             ///< factor* factor
    Matrix factor;           ///< rank x (|index| c)
    double residual = 0.0;   ///< coefficient_distance(p, q* q)
    std::size_t iterations = 0;
    bool polished = false;

    Matrix block(std::size_t i) const {
        const auto cc = static_cast<Eigen::Index>(c);
        return factor.middleCols(static_cast<Eigen::Index>(i) * cc, cc);
    }
};

/// No certificate within max_iter. Not a proof that p is not positive.
struct InfeasibleReport {
    double gap = 0.0;      ///< Frobenius distance from the last PSD iterate to the affine set
    double residual = 0.0; ///< its largest coefficient error
    std::size_t iterations = 0;
    std::size_t index_degree = 0;
};

using SosResult = std::variant<SosCertificate, InfeasibleReport>;

/// Searches a PSD Gram matrix G over S_D with sum_{s^-1 t = x} G_{s,t} = A_x
/// for all |x| <= 2D, by Dykstra's alternating projections. Requires p Hermitian.
SosResult factor_sos(const NcPolynomial& p, const SosOptions& opts = {});

/// Q_j with c x c coefficients (rows j c .. j c + c - 1 of each B_s, zero-padded)
/// so that sum_j Q_j* Q_j = q* q.
std::vector<NcPolynomial> split_squares(const SosCertificate& cert);

/// sum_j Q_j* Q_j.
NcPolynomial sum_of_squares(std::span<const NcPolynomial> squares);

} // namespace freepd

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "freepd/linalg.hpp"
#include "freepd/words.hpp"

namespace freepd {

/// Symmetric, order-closed subset of F_m: every word whose class is at or
/// before `cutoff`. Balls S_n are the special case cutoff = last class of S_n.
class Domain {
public:
    static Domain ball(const GroupContext& ctx, std::size_t n) { return Domain(ClassCursor::last_of_length(ctx, n)); }
    static Domain order_ideal(ClassCursor cutoff) { return Domain(std::move(cutoff)); }

    const ClassCursor& cutoff() const noexcept { return cutoff_; }
    bool contains(const Word& w) const { return cutoff_.covers(w); }
    bool is_ball() const { return class_successor(cutoff_).length() > cutoff_.length(); }
    /// Largest n with S_n inside the domain.
    std::size_t radius() const { return is_ball() ? cutoff_.length() : cutoff_.length() - 1; }

    friend bool operator==(const Domain& a, const Domain& b) { return a.cutoff_ == b.cutoff_; }

private:
    explicit Domain(ClassCursor cutoff) : cutoff_(std::move(cutoff)) {}
    ClassCursor cutoff_;
};

/// Block Gram matrix A(phi; S) = [phi(s^{-1} t)]_{s,t in S}.
struct GramMatrix {
    std::vector<Word> index;
    std::size_t k = 1;
    Matrix blocks;

    Matrix block(std::size_t i, std::size_t j) const {
        const auto kk = static_cast<Eigen::Index>(k);
        return blocks.block(static_cast<Eigen::Index>(i) * kk, static_cast<Eigen::Index>(j) * kk, kk, kk);
    }
};

/// Partially defined k x k matrix-valued function on F_m with phi(e) = I and
/// phi(s^{-1}) = phi(s)*. One value is stored per class {s, s^{-1}}, under the
/// lexicographically smaller word; the other is synthesized as the adjoint.
///
/// Construction does not check positivity (see verify_pd).
class PdFunction {
public:
    /// Values may be given for either word of a class (or both, if they agree).
    /// Every class of the domain needs a value. If phi(e) != I but is positive
    /// definite, the function is normalized to phi(e)^{-1/2} phi phi(e)^{-1/2};
    /// a singular phi(e) is rejected.
    PdFunction(GroupContext ctx, std::size_t k, Domain domain, std::span<const std::pair<Word, Matrix>> values);

    /// phi = I on S_0.
    static PdFunction unit(const GroupContext& ctx, std::size_t k);

    const GroupContext& context() const noexcept { return ctx_; }
    std::size_t k() const noexcept { return k_; }
    const Domain& domain() const noexcept { return domain_; }

    bool defined_at(const Word& s) const { return domain_.contains(s); }
    /// Throws InputError outside the domain.
    Matrix operator()(const Word& s) const;

    /// Stored values keyed by class representative, including e.
    const std::map<Word, Matrix>& stored() const noexcept { return values_; }

    /// (word, value) pairs for every class representative in lexicographic order.
    std::vector<std::pair<Word, Matrix>> entries() const;

    PdFunction restrict_to(const Domain& smaller) const;
    PdFunction restrict_to_ball(std::size_t n) const { return restrict_to(Domain::ball(ctx_, n)); }

    /// The same function viewed under another lexicographic order of F_m.
    PdFunction with_order(const GroupContext& ctx) const;

    /// Adds the value at the class following the current cutoff. `value` is
    /// phi(s_nu) for the representative s_nu of that class.
    PdFunction extended(const Matrix& value) const;

private:
    PdFunction(GroupContext ctx, std::size_t k, Domain domain, std::map<Word, Matrix> values)
        : ctx_(std::move(ctx)), k_(k), domain_(std::move(domain)), values_(std::move(values)) {}

    GroupContext ctx_;
    std::size_t k_;
    Domain domain_;
    std::map<Word, Matrix> values_;
};

/// A(phi; S). Throws InputError naming the first pair whose difference lies
/// outside the domain.
GramMatrix gram(const PdFunction& phi, std::span<const Word> index);

struct PdVerdict {
    bool positive = true;
    double min_eigenvalue = 0.0;
    /// Index set with the smallest eigenvalue (the failing set when !positive).
    std::vector<Word> witness;
};

/// Index sets whose Gram matrices decide positivity on S_n: B(e, n/2) for even
/// n, B(e, k) u B(a_i, k) for each generator when n = 2k + 1.
std::vector<std::vector<Word>> pd_witness_sets(const GroupContext& ctx, std::size_t n);

/// Positive definiteness on S_n (n defaults to the domain radius). Throws
/// InputError when S_n is not inside the domain.
PdVerdict verify_pd(const PdFunction& phi, const Tolerance& tol = {}, std::optional<std::size_t> n = std::nullopt);

/// Positivity of A(phi; S) for user-supplied index sets.
PdVerdict verify_pd_on(const PdFunction& phi, std::span<const std::vector<Word>> sets, const Tolerance& tol = {});

/// M(phi) = A(phi; S_n) for phi defined on S_2n.
GramMatrix toeplitz_of(const PdFunction& phi, std::size_t n);

/// Inverse of toeplitz_of. The index of `m` must be S_n (any order). Rejects
/// non-Toeplitz input (InputError naming both index pairs; entries must agree
/// within `toeplitz_eps` relative to the largest entry) and non-PSD input
/// (NotPositiveError).
PdFunction function_of_toeplitz(const GramMatrix& m, const GroupContext& ctx, const Tolerance& tol = {},
                                double toeplitz_eps = 1e-12);

/// Finite Kolmogorov data: vectors omega_s (columns of a Gram factor) with
/// omega_s* omega_t = phi(s^{-1} t) for s, t in S_n.
struct KolmogorovData {
    std::vector<Word> index;
    std::size_t k = 1;
    Matrix factor; ///< rank x (|S_n| k)

    Matrix vector(std::size_t i) const {
        const auto kk = static_cast<Eigen::Index>(k);
        return factor.middleCols(static_cast<Eigen::Index>(i) * kk, kk);
    }
};

KolmogorovData kolmogorov(const PdFunction& phi, std::size_t n, const Tolerance& tol = {});

/// Radial average: each value replaced by the mean of phi over the words of
/// the same length. Output lives on the largest ball inside the domain.
PdFunction radialize(const PdFunction& phi);

} // namespace freepd

#include "freepd/ncpoly.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "freepd/error.hpp"

namespace freepd {

namespace {

using Index = Eigen::Index;

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_compatible(const NcPolynomial& p, const NcPolynomial& q) {
    if (!(p.context() == q.context())) {
        throw InputError("polynomials over different group contexts");
    }
    if (p.c() != q.c()) {
        throw InputError("polynomials with different coefficient sizes");
    }
}

} // namespace

NcPolynomial::NcPolynomial(GroupContext ctx, std::size_t c, std::map<Word, Matrix> terms)
    : ctx_(std::move(ctx)), c_(c), terms_(std::move(terms)) {
    if (c_ == 0) {
        throw InputError("coefficient size must be positive");
    }
    const auto cc = static_cast<Index>(c_);
    for (const auto& [w, a] : terms_) {
        if (!ctx_.contains(w)) {
            throw InputError("word " + w.str() + " outside F_" + std::to_string(ctx_.generators()));
        }
        if (a.rows() != cc || a.cols() != cc || !is_finite(a)) {
            throw InputError("coefficient of " + w.str() + " must be a finite " + std::to_string(c_) + "x" + std::to_string(c_) +
                             " matrix");
        }
    }
}

NcPolynomial NcPolynomial::constant(const GroupContext& ctx, const Matrix& value) {
    if (value.rows() != value.cols()) {
        throw InputError("constant coefficient must be square");
    }
    return NcPolynomial(ctx, static_cast<std::size_t>(value.rows()), {{Word{}, value}});
}

Matrix NcPolynomial::coefficient(const Word& s) const {
    auto it = terms_.find(s);
    if (it == terms_.end()) {
        return Matrix::Zero(static_cast<Index>(c_), static_cast<Index>(c_));
    }
    return it->second;
}

std::size_t NcPolynomial::degree() const {
    std::size_t d = 0;
    for (const auto& [w, a] : terms_) {
        d = std::max(d, w.size());
    }
    return d;
}

bool NcPolynomial::is_hermitian(double rel) const {
    double scale = 0.0;
    for (const auto& [w, a] : terms_) {
        scale = std::max(scale, max_abs(a));
    }
    for (const auto& [w, a] : terms_) {
        if (max_abs(coefficient(w.inverse()) - a.adjoint()) > rel * scale) {
            return false;
        }
    }
    return true;
}

NcPolynomial nc_mul(const NcPolynomial& p, const NcPolynomial& q) {
    require_compatible(p, q);
    std::map<Word, Matrix> out;
    for (const auto& [s, a] : p.terms()) {
        for (const auto& [t, b] : q.terms()) {
            const Word x = mul(s, t);
            auto [it, inserted] = out.emplace(x, a * b);
            if (!inserted) {
                it->second += a * b;
            }
        }
    }
    return NcPolynomial(p.context(), p.c(), std::move(out));
}

NcPolynomial nc_adjoint(const NcPolynomial& p) {
    std::map<Word, Matrix> out;
    for (const auto& [s, a] : p.terms()) {
        out.emplace(s.inverse(), a.adjoint());
    }
    return NcPolynomial(p.context(), p.c(), std::move(out));
}

NcPolynomial nc_add(const NcPolynomial& p, const NcPolynomial& q) {
    require_compatible(p, q);
    std::map<Word, Matrix> out = p.terms();
    for (const auto& [t, b] : q.terms()) {
        auto [it, inserted] = out.emplace(t, b);
        if (!inserted) {
            it->second += b;
        }
    }
    return NcPolynomial(p.context(), p.c(), std::move(out));
}

double coefficient_distance(const NcPolynomial& p, const NcPolynomial& q) {
    require_compatible(p, q);
    double worst = 0.0;
    for (const auto& [s, a] : p.terms()) {
        worst = std::max(worst, max_abs(a - q.coefficient(s)));
    }
    for (const auto& [t, b] : q.terms()) {
        if (!p.terms().contains(t)) {
            worst = std::max(worst, max_abs(b));
        }
    }
    return worst;
}

Matrix eval_unitaries(const NcPolynomial& p, std::span<const Matrix> unitaries) {
    if (unitaries.size() != static_cast<std::size_t>(p.context().generators())) {
        throw InputError("need one unitary per generator");
    }
    const Index d = unitaries.empty() ? 1 : unitaries[0].rows();
    for (const Matrix& u : unitaries) {
        if (u.rows() != d || u.cols() != d || !is_finite(u)) {
            throw InputError("unitaries must be finite square matrices of one common size");
        }
        if (max_abs(u.adjoint() * u - Matrix::Identity(d, d)) > 1e-10) {
            throw InputError("substituted matrix is not unitary");
        }
    }
    const auto cc = static_cast<Index>(p.c());
    Matrix out = Matrix::Zero(cc * d, cc * d);
    for (const auto& [s, a] : p.terms()) {
        Matrix us = Matrix::Identity(d, d);
        for (int letter : s.letters()) {
            const Matrix& u = unitaries[static_cast<std::size_t>(std::abs(letter) - 1)];
            us = letter > 0 ? Matrix(us * u) : Matrix(us * u.adjoint());
        }
        for (Index i = 0; i < cc; ++i) {
            for (Index j = 0; j < cc; ++j) {
                out.block(i * d, j * d, d, d) += a(i, j) * us;
            }
        }
    }
    return out;
}

Matrix haar_unitary(std::size_t d, std::mt19937_64& rng) {
    const auto n = static_cast<Index>(d);
    std::normal_distribution<double> normal;
    Matrix g(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            const double re = normal(rng);
            g(i, j) = Complex(re, normal(rng));
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix& r = qr.matrixQR();
    for (Index i = 0; i < n; ++i) {
        const double mag = std::abs(r(i, i));
        if (mag > 0.0) {
            q.col(i) *= r(i, i) / mag;
        }
    }
    return q;
}

SampleReport sample_positivity(const NcPolynomial& p, std::size_t trials, std::size_t d_max, std::uint64_t seed) {
    if (!p.is_hermitian()) {
        throw InputError("sample_positivity needs a Hermitian polynomial");
    }
    if (trials == 0 || d_max == 0) {
        throw InputError("trials and d_max must be positive");
    }
    std::mt19937_64 rng(seed);
    SampleReport best;
    const auto m = static_cast<std::size_t>(p.context().generators());
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t d = 1 + t % d_max;
        std::vector<Matrix> us;
        for (std::size_t i = 0; i < m; ++i) {
            us.push_back(haar_unitary(d, rng));
        }
        const double lo = min_eigenvalue(hermitian_part(eval_unitaries(p, us)));
        if (t == 0 || lo < best.min_eigenvalue) {
            best = {lo, t, d};
        }
    }
    return best;
}

namespace {

// Coefficient constraints of the Gram problem over S_D.
struct GramSystem {
    std::vector<Word> index;
    std::size_t c = 1;
    struct Group {
        Word x;
        std::vector<std::pair<Index, Index>> pairs;
        Matrix target;
        bool representative; ///< x <= x^-1 in storage order; the others are adjoints
    };
    std::vector<Group> groups;

    GramSystem(const NcPolynomial& p, std::size_t degree) : index(ball(p.context(), degree)), c(p.c()) {
        std::map<Word, std::size_t> slot;
        const auto n = static_cast<Index>(index.size());
        for (Index i = 0; i < n; ++i) {
            const Word si = index[static_cast<std::size_t>(i)].inverse();
            for (Index j = 0; j < n; ++j) {
                const Word x = mul(si, index[static_cast<std::size_t>(j)]);
                auto [it, inserted] = slot.emplace(x, groups.size());
                if (inserted) {
                    groups.push_back({x, {}, p.coefficient(x), !(x.inverse() < x)});
                }
                groups[it->second].pairs.emplace_back(i, j);
            }
        }
        for (const auto& [w, a] : p.terms()) {
            if (!slot.contains(w) && max_abs(a) > 0.0) {
                throw InputError("term " + w.str() + " is too long for a Gram matrix over S_" + std::to_string(degree));
            }
        }
    }

    Index dim() const { return static_cast<Index>(index.size() * c); }

    Matrix group_sum(const Matrix& g, const Group& grp) const {
        const auto cc = static_cast<Index>(c);
        Matrix sum = Matrix::Zero(cc, cc);
        for (const auto& [i, j] : grp.pairs) {
            sum += g.block(i * cc, j * cc, cc, cc);
        }
        return sum;
    }

    // Orthogonal projection onto the affine set; returns the Frobenius length of the move.
    double project(Matrix& g) const {
        const auto cc = static_cast<Index>(c);
        double moved = 0.0;
        for (const Group& grp : groups) {
            const Matrix delta = (grp.target - group_sum(g, grp)) / static_cast<double>(grp.pairs.size());
            for (const auto& [i, j] : grp.pairs) {
                g.block(i * cc, j * cc, cc, cc) += delta;
            }
            moved += static_cast<double>(grp.pairs.size()) * delta.squaredNorm();
        }
        return std::sqrt(moved);
    }

    double residual(const Matrix& g) const {
        double worst = 0.0;
        for (const Group& grp : groups) {
            if (grp.representative) {
                worst = std::max(worst, max_abs(grp.target - group_sum(g, grp)));
            }
        }
        return worst;
    }
};

// Levenberg-Marquardt on the residuals sum_{s^-1 t = x} B_s* B_t - A_x, real
// and imaginary parts of B as parameters.
class FactorPolish {
public:
    FactorPolish(const GramSystem& sys, Matrix b) : sys_(sys), b_(std::move(b)) {
        for (std::size_t g = 0; g < sys_.groups.size(); ++g) {
            if (sys_.groups[g].representative) {
                reps_.push_back(g);
            }
        }
    }

    const Matrix& factor() const { return b_; }

    void run(double target, std::size_t max_steps) {
        Eigen::VectorXd r = residuals(b_);
        double cost = r.squaredNorm();
        double lambda = -1.0;
        for (std::size_t step = 0; step < max_steps && r.cwiseAbs().maxCoeff() > target; ++step) {
            const Eigen::MatrixXd j = jacobian();
            const bool wide = j.rows() < j.cols();
            const Eigen::MatrixXd normal = wide ? Eigen::MatrixXd(j * j.transpose()) : Eigen::MatrixXd(j.transpose() * j);
            if (lambda < 0.0) {
                lambda = 1e-3 * normal.diagonal().maxCoeff();
            }
            bool accepted = false;
            for (int attempt = 0; attempt < 30 && !accepted; ++attempt) {
                Eigen::MatrixXd damped = normal;
                damped.diagonal().array() += lambda;
                Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
                const Eigen::VectorXd delta =
                    wide ? Eigen::VectorXd(-j.transpose() * ldlt.solve(r)) : Eigen::VectorXd(-ldlt.solve(j.transpose() * r));
                const Matrix trial = b_ + unpack(delta);
                const Eigen::VectorXd r_trial = residuals(trial);
                const double c_trial = r_trial.squaredNorm();
                if (std::isfinite(c_trial) && c_trial < cost) {
                    b_ = trial;
                    r = r_trial;
                    cost = c_trial;
                    lambda = std::max(lambda / 3.0, 1e-15);
                    accepted = true;
                } else {
                    lambda *= 4.0;
                }
            }
            if (!accepted) {
                break;
            }
        }
    }

private:
    Index rank() const { return b_.rows(); }
    Index cc() const { return static_cast<Index>(sys_.c); }

    Index param(Index block, Index a, Index col, int part) const { return (((block * cc() + col) * rank() + a) * 2) + part; }
    Index row(std::size_t g, Index u, Index v) const { return ((static_cast<Index>(g) * cc() + u) * cc() + v) * 2; }

    Eigen::VectorXd residuals(const Matrix& b) const {
        Eigen::VectorXd r(static_cast<Index>(reps_.size()) * cc() * cc() * 2);
        for (std::size_t g = 0; g < reps_.size(); ++g) {
            const auto& grp = sys_.groups[reps_[g]];
            Matrix sum = -grp.target;
            for (const auto& [i, j] : grp.pairs) {
                sum += b.middleCols(i * cc(), cc()).adjoint() * b.middleCols(j * cc(), cc());
            }
            for (Index u = 0; u < cc(); ++u) {
                for (Index v = 0; v < cc(); ++v) {
                    r(row(g, u, v)) = sum(u, v).real();
                    r(row(g, u, v) + 1) = sum(u, v).imag();
                }
            }
        }
        return r;
    }

    Eigen::MatrixXd jacobian() const {
        const Index nparams = b_.size() * 2;
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(static_cast<Index>(reps_.size()) * cc() * cc() * 2, nparams);
        const Complex i_unit(0.0, 1.0);
        auto add = [&j](Index r, Index col, Complex z) {
            j(r, col) += z.real();
            j(r + 1, col) += z.imag();
        };
        for (std::size_t g = 0; g < reps_.size(); ++g) {
            for (const auto& [bi, bj] : sys_.groups[reps_[g]].pairs) {
                for (Index a = 0; a < rank(); ++a) {
                    for (Index col = 0; col < cc(); ++col) {
                        // d/dB_i(a,col): entries (col, v) gain conj(dB) B_j(a, v)
                        for (Index v = 0; v < cc(); ++v) {
                            const Complex bjv = b_(a, bj * cc() + v);
                            add(row(g, col, v), param(bi, a, col, 0), bjv);
                            add(row(g, col, v), param(bi, a, col, 1), -i_unit * bjv);
                        }
                        // d/dB_j(a,col): entries (u, col) gain conj(B_i(a, u)) dB
                        for (Index u = 0; u < cc(); ++u) {
                            const Complex biu = std::conj(b_(a, bi * cc() + u));
                            add(row(g, u, col), param(bj, a, col, 0), biu);
                            add(row(g, u, col), param(bj, a, col, 1), i_unit * biu);
                        }
                    }
                }
            }
        }
        return j;
    }

    Matrix unpack(const Eigen::VectorXd& delta) const {
        Matrix d(rank(), b_.cols());
        const auto blocks = static_cast<Index>(sys_.index.size());
        for (Index blk = 0; blk < blocks; ++blk) {
            for (Index a = 0; a < rank(); ++a) {
                for (Index col = 0; col < cc(); ++col) {
                    d(a, blk * cc() + col) = Complex(delta(param(blk, a, col, 0)), delta(param(blk, a, col, 1)));
                }
            }
        }
        return d;
    }

    const GramSystem& sys_;
    Matrix b_;
    std::vector<std::size_t> reps_;
};

Matrix truncated_factor(const EigenDecomposition& e, double rel_cutoff) {
    const double top = e.values.size() ? std::max(e.values(0), 0.0) : 0.0;
    Index r = 0;
    while (r < e.values.size() && e.values(r) > rel_cutoff * top && e.values(r) > 0.0) {
        ++r;
    }
    Matrix f(r, e.vectors.rows());
    for (Index i = 0; i < r; ++i) {
        f.row(i) = std::sqrt(e.values(i)) * e.vectors.col(i).adjoint();
    }
    return f;
}

SosResult solve_at_degree(const NcPolynomial& p, std::size_t degree, const SosOptions& opts) {
    const GramSystem sys(p, degree);
    const Index n = sys.dim();
    Matrix x = Matrix::Zero(n, n);
    Matrix q = Matrix::Zero(n, n);
    Matrix basis = Matrix::Identity(n, n);
    EigenDecomposition last;
    std::size_t iter = 0;
    double res = sys.residual(x);
    while (iter < opts.max_iter && !(iter > 0 && res <= opts.tol / 10.0)) {
        Matrix z = x;
        sys.project(z);
        z += q;
        last = eig_hermitian(hermitian_part(z), basis);
        basis = last.vectors;
        RealVector clipped = last.values.cwiseMax(0.0);
        x = last.vectors * clipped.asDiagonal() * last.vectors.adjoint();
        q = z - x;
        res = sys.residual(x);
        ++iter;
    }

    auto certify = [&](Matrix factor, bool polished) -> std::optional<SosCertificate> {
        const Matrix g = factor.adjoint() * factor;
        const double r = sys.residual(g);
        if (!(r <= opts.tol)) {
            return std::nullopt;
        }
        return SosCertificate{p.context(), p.c(), sys.index, g, std::move(factor), r, iter, polished};
    };

    if (iter > 0) {
        last.values = last.values.cwiseMax(0.0);
        if (auto cert = certify(truncated_factor(last, 1e-14), false)) {
            return *cert;
        }
        if (opts.polish) {
            FactorPolish lm(sys, truncated_factor(last, 1e-6));
            lm.run(opts.tol / 10.0, 200);
            if (auto cert = certify(lm.factor(), true)) {
                return *cert;
            }
        }
    }
    Matrix moved = x;
    const double gap = sys.project(moved);
    return InfeasibleReport{gap, res, iter, degree};
}

} // namespace

SosResult factor_sos(const NcPolynomial& p, const SosOptions& opts) {
    if (!(opts.tol > 0.0)) {
        throw InputError("factor_sos: tol must be positive");
    }
    if (!p.is_hermitian()) {
        throw InputError("factor_sos needs a Hermitian polynomial");
    }
    const std::size_t d = p.degree();
    if (opts.index_degree) {
        return solve_at_degree(p, *opts.index_degree, opts);
    }
    const std::size_t half = (d + 1) / 2;
    SosResult r = solve_at_degree(p, half, opts);
    if (std::holds_alternative<SosCertificate>(r) || half == d) {
        return r;
    }
    return solve_at_degree(p, d, opts);
}

std::vector<NcPolynomial> split_squares(const SosCertificate& cert) {
    const auto cc = static_cast<Index>(cert.c);
    const Index rows = cert.factor.rows();
    const Index pieces = std::max<Index>(1, (rows + cc - 1) / cc);
    std::vector<NcPolynomial> out;
    for (Index j = 0; j < pieces; ++j) {
        const Index take = std::min(cc, rows - j * cc);
        std::map<Word, Matrix> terms;
        for (std::size_t i = 0; i < cert.index.size(); ++i) {
            Matrix coef = Matrix::Zero(cc, cc);
            if (take > 0) {
                coef.topRows(take) = cert.block(i).middleRows(j * cc, take);
            }
            terms.emplace(cert.index[i], std::move(coef));
        }
        out.emplace_back(cert.ctx, cert.c, std::move(terms));
    }
    return out;
}

NcPolynomial sum_of_squares(std::span<const NcPolynomial> squares) {
    if (squares.empty()) {
        throw InputError("sum_of_squares needs at least one polynomial");
    }
    NcPolynomial total = nc_mul(nc_adjoint(squares[0]), squares[0]);
    for (std::size_t j = 1; j < squares.size(); ++j) {
        total = nc_add(total, nc_mul(nc_adjoint(squares[j]), squares[j]));
    }
    return total;
}

} // namespace freepd

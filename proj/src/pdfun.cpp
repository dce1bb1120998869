#include "freepd/pdfun.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "freepd/error.hpp"

namespace freepd {

namespace {

Matrix inverse_sqrt_pd(const Matrix& a) {
    EigenDecomposition e = eig_hermitian(a);
    RealVector d(e.values.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        d(i) = 1.0 / std::sqrt(e.values(i));
    }
    return hermitian_part(e.vectors * d.asDiagonal() * e.vectors.adjoint());
}

void sort_lex(std::vector<Word>& words, const GroupContext& ctx) {
    std::sort(words.begin(), words.end(), [&ctx](const Word& a, const Word& b) { return lex_less(a, b, ctx); });
}

} // namespace

PdFunction::PdFunction(GroupContext ctx, std::size_t k, Domain domain, std::span<const std::pair<Word, Matrix>> values)
    : ctx_(std::move(ctx)), k_(k), domain_(std::move(domain)) {
    if (k_ == 0) {
        throw InputError("block size must be positive");
    }
    if (!(domain_.cutoff().context() == ctx_)) {
        throw InputError("domain and function use different group contexts");
    }
    const auto kk = static_cast<Eigen::Index>(k_);
    for (const auto& [word, value] : values) {
        if (!ctx_.contains(word)) {
            throw InputError("word " + word.str() + " outside F_" + std::to_string(ctx_.generators()));
        }
        if (value.rows() != kk || value.cols() != kk) {
            throw InputError("value at " + word.str() + " is not " + std::to_string(k_) + "x" + std::to_string(k_));
        }
        if (!is_finite(value)) {
            throw InputError("value at " + word.str() + " has non-finite entries");
        }
        if (!domain_.contains(word)) {
            throw InputError("word " + word.str() + " lies outside the declared domain");
        }
        const Word rep = class_rep(word, ctx_);
        const Matrix v = rep == word ? value : Matrix(value.adjoint());
        auto [it, inserted] = values_.emplace(rep, v);
        if (!inserted) {
            const double scale = std::max(1.0, it->second.cwiseAbs().maxCoeff());
            if ((it->second - v).cwiseAbs().maxCoeff() > 1e-12 * scale) {
                throw InputError("values at " + word.str() + " and its inverse are not adjoint");
            }
        }
    }

    // every class of the domain needs a value
    for (ClassCursor nu = ClassCursor::unit(ctx_);; nu = class_successor(nu)) {
        if (!values_.contains(nu.rep())) {
            throw InputError("missing value for the class of " + nu.rep().str());
        }
        if (nu == domain_.cutoff()) {
            break;
        }
    }

    Matrix& at_e = values_.at(Word{});
    if (at_e != Matrix::Identity(kk, kk)) {
        if (!is_hermitian(at_e)) {
            throw InputError("phi(e) is not Hermitian");
        }
        EigenDecomposition e = eig_hermitian(at_e);
        if (!(e.values(kk - 1) > 1e-12 * std::max(1.0, e.values(0)))) {
            throw MathError("phi(e) is singular or not positive; cannot normalize");
        }
        const Matrix p = inverse_sqrt_pd(at_e);
        for (auto& [word, value] : values_) {
            value = p * value * p;
        }
        at_e = Matrix::Identity(kk, kk);
    }
}

PdFunction PdFunction::unit(const GroupContext& ctx, std::size_t k) {
    const auto kk = static_cast<Eigen::Index>(k);
    std::map<Word, Matrix> values{{Word{}, Matrix::Identity(kk, kk)}};
    return PdFunction(ctx, k, Domain::ball(ctx, 0), std::move(values));
}

Matrix PdFunction::operator()(const Word& s) const {
    if (!domain_.contains(s)) {
        throw InputError("phi is not defined at " + s.str());
    }
    const Word rep = class_rep(s, ctx_);
    const Matrix& v = values_.at(rep);
    return rep == s ? v : Matrix(v.adjoint());
}

std::vector<std::pair<Word, Matrix>> PdFunction::entries() const {
    std::vector<std::pair<Word, Matrix>> out(values_.begin(), values_.end());
    std::sort(out.begin(), out.end(), [this](const auto& a, const auto& b) { return lex_less(a.first, b.first, ctx_); });
    return out;
}

PdFunction PdFunction::restrict_to(const Domain& smaller) const {
    if (smaller.cutoff() > domain_.cutoff()) {
        throw InputError("restriction target is larger than the domain");
    }
    std::map<Word, Matrix> kept;
    for (const auto& [word, value] : values_) {
        if (smaller.contains(word)) {
            kept.emplace(word, value);
        }
    }
    return PdFunction(ctx_, k_, smaller, std::move(kept));
}

PdFunction PdFunction::with_order(const GroupContext& ctx) const {
    if (ctx.generators() != ctx_.generators()) {
        throw InputError("with_order: different number of generators");
    }
    if (!domain_.is_ball()) {
        throw InputError("with_order: only ball domains are order independent");
    }
    std::vector<std::pair<Word, Matrix>> vals(values_.begin(), values_.end());
    return PdFunction(ctx, k_, Domain::ball(ctx, domain_.radius()), vals);
}

PdFunction PdFunction::extended(const Matrix& value) const {
    const ClassCursor next = class_successor(domain_.cutoff());
    const auto kk = static_cast<Eigen::Index>(k_);
    if (value.rows() != kk || value.cols() != kk) {
        throw InputError("extension value has the wrong shape");
    }
    std::map<Word, Matrix> vals = values_;
    vals.emplace(next.rep(), value);
    return PdFunction(ctx_, k_, Domain::order_ideal(next), std::move(vals));
}

GramMatrix gram(const PdFunction& phi, std::span<const Word> index) {
    const std::size_t n = index.size();
    const auto kk = static_cast<Eigen::Index>(phi.k());
    GramMatrix g{std::vector<Word>(index.begin(), index.end()), phi.k(), Matrix(static_cast<Eigen::Index>(n) * kk, static_cast<Eigen::Index>(n) * kk)};
    for (std::size_t i = 0; i < n; ++i) {
        const Word si = index[i].inverse();
        for (std::size_t j = 0; j < n; ++j) {
            const Word x = mul(si, index[j]);
            if (!phi.defined_at(x)) {
                throw InputError("gram: phi undefined at s^-1 t for s=" + index[i].str() + ", t=" + index[j].str());
            }
            g.blocks.block(static_cast<Eigen::Index>(i) * kk, static_cast<Eigen::Index>(j) * kk, kk, kk) = phi(x);
        }
    }
    return g;
}

std::vector<std::vector<Word>> pd_witness_sets(const GroupContext& ctx, std::size_t n) {
    const std::size_t half = n / 2;
    std::vector<Word> center = ball(ctx, half);
    if (n % 2 == 0) {
        return {center};
    }
    std::vector<std::vector<Word>> sets;
    for (int i = 1; i <= ctx.generators(); ++i) {
        std::set<Word> merged(center.begin(), center.end());
        const Word a{i};
        for (const Word& w : center) {
            merged.insert(mul(a, w));
        }
        std::vector<Word> set(merged.begin(), merged.end());
        sort_lex(set, ctx);
        sets.push_back(std::move(set));
    }
    return sets;
}

PdVerdict verify_pd_on(const PdFunction& phi, std::span<const std::vector<Word>> sets, const Tolerance& tol) {
    tol.validate();
    PdVerdict verdict;
    bool first = true;
    for (const auto& set : sets) {
        const GramMatrix g = gram(phi, set);
        EigenDecomposition e = eig_hermitian(hermitian_part(g.blocks));
        const double lowest = e.values(e.values.size() - 1);
        const double norm = std::max(std::abs(e.values(0)), std::abs(lowest));
        const bool ok = lowest >= -tol.psd_eps * std::max(1.0, norm);
        if (first || lowest < verdict.min_eigenvalue) {
            verdict.min_eigenvalue = lowest;
            if (verdict.positive) {
                verdict.witness = set;
            }
        }
        if (!ok && verdict.positive) {
            verdict.positive = false;
            verdict.witness = set;
        }
        first = false;
    }
    return verdict;
}

PdVerdict verify_pd(const PdFunction& phi, const Tolerance& tol, std::optional<std::size_t> n) {
    const std::size_t radius = n.value_or(phi.domain().radius());
    if (radius > phi.domain().radius()) {
        throw InputError("verify_pd: S_" + std::to_string(radius) + " is not inside the domain");
    }
    const auto sets = pd_witness_sets(phi.context(), radius);
    return verify_pd_on(phi, sets, tol);
}

GramMatrix toeplitz_of(const PdFunction& phi, std::size_t n) {
    if (phi.domain().radius() < 2 * n) {
        throw InputError("toeplitz_of: phi must be defined on S_" + std::to_string(2 * n));
    }
    const auto index = ball(phi.context(), n);
    return gram(phi, index);
}

PdFunction function_of_toeplitz(const GramMatrix& m, const GroupContext& ctx, const Tolerance& tol, double toeplitz_eps) {
    const std::size_t p = m.index.size();
    const auto kk = static_cast<Eigen::Index>(m.k);
    if (m.k == 0 || m.blocks.rows() != static_cast<Eigen::Index>(p) * kk || m.blocks.cols() != m.blocks.rows()) {
        throw InputError("function_of_toeplitz: block dimensions do not match the index");
    }
    std::size_t n = 0;
    for (const Word& w : m.index) {
        n = std::max(n, w.size());
    }
    {
        std::set<Word> have(m.index.begin(), m.index.end());
        const auto expected = ball(ctx, n);
        if (have.size() != p || have != std::set<Word>(expected.begin(), expected.end())) {
            throw InputError("function_of_toeplitz: index is not a ball S_n");
        }
    }
    if (!is_finite(m.blocks)) {
        throw InputError("function_of_toeplitz: non-finite entries");
    }

    const double scale = std::max(1.0, m.blocks.cwiseAbs().maxCoeff());
    struct Seen {
        std::size_t i, j;
        Matrix value; // phi(rep)
    };
    std::map<Word, Seen> first;
    for (std::size_t i = 0; i < p; ++i) {
        const Word si = m.index[i].inverse();
        for (std::size_t j = 0; j < p; ++j) {
            const Word x = mul(si, m.index[j]);
            const Word rep = class_rep(x, ctx);
            const Matrix b = m.block(i, j);
            const Matrix as_rep = rep == x ? b : Matrix(b.adjoint());
            auto [it, inserted] = first.emplace(rep, Seen{i, j, as_rep});
            if (!inserted && (it->second.value - as_rep).cwiseAbs().maxCoeff() > toeplitz_eps * scale) {
                const auto& f = it->second;
                throw InputError("function_of_toeplitz: not Toeplitz, entries (" + m.index[f.i].str() + "," + m.index[f.j].str() +
                                 ") and (" + m.index[i].str() + "," + m.index[j].str() + ") disagree");
            }
        }
    }

    EigenDecomposition e = eig_hermitian(hermitian_part(m.blocks));
    const double lowest = e.values(e.values.size() - 1);
    const double norm = std::max(std::abs(e.values(0)), std::abs(lowest));
    if (lowest < -tol.psd_eps * std::max(1.0, norm)) {
        throw NotPositiveError("function_of_toeplitz: matrix is not positive semidefinite", "S_" + std::to_string(n), lowest);
    }

    std::vector<std::pair<Word, Matrix>> values;
    values.reserve(first.size());
    for (auto& [rep, seen] : first) {
        values.emplace_back(rep, std::move(seen.value));
    }
    return PdFunction(ctx, m.k, Domain::ball(ctx, 2 * n), values);
}

KolmogorovData kolmogorov(const PdFunction& phi, std::size_t n, const Tolerance& tol) {
    GramMatrix m = toeplitz_of(phi, n);
    KolmogorovData out{std::move(m.index), phi.k(), Matrix()};
    try {
        out.factor = gram_factor(hermitian_part(m.blocks), tol);
    } catch (const NotPositiveError& err) {
        throw NotPositiveError("kolmogorov: Toeplitz matrix over S_" + std::to_string(n) + " is not positive semidefinite",
                               "S_" + std::to_string(n), err.min_eigenvalue());
    }
    return out;
}

PdFunction radialize(const PdFunction& phi) {
    const GroupContext& ctx = phi.context();
    const std::size_t n = phi.domain().radius();
    const auto kk = static_cast<Eigen::Index>(phi.k());
    std::vector<std::pair<Word, Matrix>> values;
    for (std::size_t len = 0; len <= n; ++len) {
        const auto words = sphere(ctx, len);
        Matrix mean = Matrix::Zero(kk, kk);
        for (const Word& w : words) {
            mean += phi(w);
        }
        // the sphere is closed under inversion, so the mean is Hermitian
        mean = hermitian_part(mean / static_cast<double>(words.size()));
        if (len == 0) {
            mean = Matrix::Identity(kk, kk);
        }
        for (const Word& w : words) {
            if (class_rep(w, ctx) == w) {
                values.emplace_back(w, mean);
            }
        }
    }
    return PdFunction(ctx, phi.k(), Domain::ball(ctx, n), values);
}

} // namespace freepd

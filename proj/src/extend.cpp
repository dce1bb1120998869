#include "freepd/extend.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <string>

#include "freepd/cayley.hpp"
#include "freepd/error.hpp"

namespace freepd {

namespace {

using Index = Eigen::Index;

ContractionParam accept_oracle_value(Matrix gamma, const DefectData& d, const ClassCursor& nu) {
    if (gamma.rows() != d.defect_row.rows() || gamma.cols() != d.defect_col.rows()) {
        throw InputError("parameter for the class of " + nu.rep().str() + " is " + std::to_string(gamma.rows()) + "x" +
                         std::to_string(gamma.cols()) + ", expected " + std::to_string(d.defect_row.rows()) + "x" +
                         std::to_string(d.defect_col.rows()));
    }
    if (!is_finite(gamma)) {
        throw InputError("parameter for the class of " + nu.rep().str() + " has non-finite entries");
    }
    const double n = spectral_norm(gamma);
    if (n > 1.0 + 1e-9) {
        throw MathError("parameter for the class of " + nu.rep().str() + " has norm " + std::to_string(n) + " > 1");
    }
    if (n > 1.0) {
        gamma /= n;
    }
    return ContractionParam(std::move(gamma));
}

void require_next(const PdFunction& phi, const ClassCursor& nu) {
    if (!(nu.context() == phi.context())) {
        throw InputError("class and function use different group contexts");
    }
    if (!(class_successor(phi.domain().cutoff()) == nu)) {
        throw InputError("the class of " + nu.rep().str() + " does not follow the domain of phi");
    }
}

struct StepResult {
    PdFunction function;
    ExtensionStep step;
};

StepResult run_step(const PdFunction& phi, const ClassCursor& nu, const ParamOracle& oracle, const Tolerance& tol) {
    require_next(phi, nu);
    StepProblem problem = step_problem(phi, nu);
    const DefectData d = analyze(problem.matrix, tol);
    const ContractionParam gamma = accept_oracle_value(oracle(nu, d), d, nu);
    Matrix value = completed_entry(d, gamma);
    PdFunction next = phi.extended(value);
    return {std::move(next), ExtensionStep{nu, std::move(problem.clique), d.central_entry, gamma.matrix(), std::move(value)}};
}

} // namespace

ParamOracle zero_oracle() {
    return [](const ClassCursor&, const DefectData& d) { return Matrix(Matrix::Zero(d.defect_row.rows(), d.defect_col.rows())); };
}

ParamOracle table_oracle(std::vector<ParamEntry> params) {
    auto table = std::make_shared<const std::vector<ParamEntry>>(std::move(params));
    return [table](const ClassCursor& nu, const DefectData&) -> Matrix {
        for (const ParamEntry& p : *table) {
            if (p.nu == nu) {
                return p.gamma.matrix();
            }
        }
        throw InputError("no parameter given for the class of " + nu.rep().str());
    };
}

ParamOracle random_oracle(std::uint64_t seed, double radius) {
    if (!(radius > 0.0 && radius <= 1.0)) {
        throw InputError("random oracle radius must lie in (0, 1]");
    }
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [rng, radius](const ClassCursor&, const DefectData& d) -> Matrix {
        const Index r = d.defect_row.rows();
        const Index c = d.defect_col.rows();
        Matrix g(r, c);
        std::normal_distribution<double> normal;
        for (Index j = 0; j < c; ++j) {
            for (Index i = 0; i < r; ++i) {
                const double re = normal(*rng);
                g(i, j) = Complex(re, normal(*rng));
            }
        }
        const double u = std::uniform_real_distribution<double>(0.0, radius)(*rng);
        if (g.size() == 0) {
            return g;
        }
        const double s = spectral_norm(g);
        return s > 0.0 ? Matrix(g * (u / s)) : g;
    };
}

StepProblem step_problem(const PdFunction& phi, const ClassCursor& nu) {
    std::vector<Word> clique = clique_C(nu);
    const std::size_t n = clique.size();
    const auto kk = static_cast<Index>(phi.k());
    const Word& s = nu.rep();
    std::size_t col = n;
    Matrix a(static_cast<Index>(n) * kk, static_cast<Index>(n) * kk);
    for (std::size_t i = 0; i < n; ++i) {
        if (clique[i] == s) {
            col = i;
        }
        const Word inv = clique[i].inverse();
        for (std::size_t j = 0; j < n; ++j) {
            const Word x = mul(inv, clique[j]);
            auto blk = a.block(static_cast<Index>(i) * kk, static_cast<Index>(j) * kk, kk, kk);
            if (phi.defined_at(x)) {
                blk = phi(x);
            } else if ((i == 0 || j == 0) && (x == s || x == s.inverse())) {
                blk.setZero();
            } else {
                throw InputError("phi undefined at " + x.str() + " inside the clique of " + s.str());
            }
        }
    }
    // clique_C sorts lexicographically, so e comes first
    return StepProblem{std::move(clique), PartialBlockMatrix(std::move(a), phi.k(), 0, col)};
}

PdFunction extend_one(const PdFunction& phi, const ClassCursor& nu, const ContractionParam& gamma, const Tolerance& tol) {
    require_next(phi, nu);
    const StepProblem problem = step_problem(phi, nu);
    return phi.extended(completed_entry(analyze(problem.matrix, tol), gamma));
}

Extension extend_to_ball(const PdFunction& phi, std::size_t n_target, const ParamOracle& oracle, const Tolerance& tol) {
    const GroupContext& ctx = phi.context();
    const ClassCursor last = ClassCursor::last_of_length(ctx, n_target);
    if (phi.domain().cutoff() > last) {
        throw InputError("target ball S_" + std::to_string(n_target) + " is smaller than the domain");
    }
    if (!ball_size(ctx.generators(), n_target, kDefaultBallCap)) {
        throw InputError("S_" + std::to_string(n_target) + " exceeds the size cap");
    }
    Extension out{phi, {}};
    while (out.function.domain().cutoff() < last) {
        const ClassCursor nu = class_successor(out.function.domain().cutoff());
        StepResult r = run_step(out.function, nu, oracle, tol);
        out.function = std::move(r.function);
        out.trace.steps.push_back(std::move(r.step));
    }
    return out;
}

PdFunction replay(const PdFunction& phi, const ExtensionTrace& trace, const Tolerance& tol) {
    PdFunction cur = phi;
    for (const ExtensionStep& step : trace.steps) {
        cur = extend_one(cur, step.nu, ContractionParam(step.gamma), tol);
    }
    return cur;
}

std::vector<ParamEntry> extract_params(const PdFunction& phi, std::size_t n, const Tolerance& tol) {
    const GroupContext& ctx = phi.context();
    std::vector<ParamEntry> out;
    const ClassCursor cutoff = phi.domain().cutoff();
    if (ClassCursor::last_of_length(ctx, n) >= cutoff) {
        return out;
    }
    for (ClassCursor nu = ClassCursor::first_of_length(ctx, n + 1);; nu = class_successor(nu)) {
        const StepProblem problem = step_problem(phi, nu);
        const DefectData d = analyze(problem.matrix, tol);
        out.push_back({nu, extract_gamma(d, phi(nu.rep()), tol)});
        if (nu == cutoff) {
            break;
        }
    }
    return out;
}

OrthogonalityReport check_max_orthogonal(const PdFunction& phi, std::size_t n, const Tolerance& tol, double ortho_tol) {
    const GroupContext& ctx = phi.context();
    if (phi.domain().radius() < n + 1) {
        throw InputError("check_max_orthogonal needs phi on S_" + std::to_string(n + 1));
    }
    const auto kk = static_cast<Index>(phi.k());
    OrthogonalityReport report;
    for (ClassCursor nu = ClassCursor::first_of_length(ctx, n + 1); nu.length() == n + 1; nu = class_successor(nu)) {
        const Word& t = nu.rep();
        std::vector<Word> index = sigma_set(Word{}, t, n, ctx);
        const auto sigma = static_cast<Index>(index.size());
        index.push_back(Word{});
        index.push_back(t);

        const GramMatrix g = gram(phi, index);
        const Matrix w = gram_factor(hermitian_part(g.blocks), tol);
        const Matrix w_sigma = w.leftCols(sigma * kk);
        const Matrix omega_e = w.middleCols(sigma * kk, kk);
        const Matrix omega_t = w.middleCols((sigma + 1) * kk, kk);
        Matrix res_e = omega_e;
        Matrix res_t = omega_t;
        if (sigma > 0) {
            const Matrix proj = w_sigma * pinv(w_sigma, tol);
            res_e -= proj * omega_e;
            res_t -= proj * omega_t;
        }
        const double v = spectral_norm(res_e.adjoint() * res_t);
        if (v > report.worst_violation) {
            report.worst_violation = v;
            report.worst_word = t;
        }
    }
    report.holds = report.worst_violation <= ortho_tol;
    return report;
}

} // namespace freepd

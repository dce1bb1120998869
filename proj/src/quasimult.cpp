#include "freepd/quasimult.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "freepd/error.hpp"

namespace freepd {

GeneratorAssignment::GeneratorAssignment(GroupContext ctx, std::size_t k, std::vector<Matrix> values)
    : ctx_(std::move(ctx)), k_(k), values_(std::move(values)) {
    if (k_ == 0) {
        throw InputError("block size must be positive");
    }
    if (values_.size() != static_cast<std::size_t>(ctx_.generators())) {
        throw InputError("need one value per generator");
    }
    const auto kk = static_cast<Eigen::Index>(k_);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const Matrix& v = values_[i];
        if (v.rows() != kk || v.cols() != kk || !is_finite(v)) {
            throw InputError("value at a_" + std::to_string(i + 1) + " must be a finite " + std::to_string(k_) + "x" +
                             std::to_string(k_) + " matrix");
        }
        const double n = spectral_norm(v);
        if (n > 1.0 + 1e-12) {
            throw MathError("value at a_" + std::to_string(i + 1) + " has norm " + std::to_string(n) + " > 1");
        }
    }
}

GeneratorAssignment GeneratorAssignment::scalar(const GroupContext& ctx, std::size_t k, double r) {
    const auto kk = static_cast<Eigen::Index>(k);
    return GeneratorAssignment(ctx, k, std::vector<Matrix>(static_cast<std::size_t>(ctx.generators()), r * Matrix::Identity(kk, kk)));
}

Matrix quasi_mult(const GeneratorAssignment& g, const Word& s) {
    if (!g.context().contains(s)) {
        throw InputError("word " + s.str() + " outside F_" + std::to_string(g.context().generators()));
    }
    const auto kk = static_cast<Eigen::Index>(g.k());
    Matrix out = Matrix::Identity(kk, kk);
    for (int letter : s.letters()) {
        if (letter > 0) {
            out = out * g.at(letter);
        } else {
            out = out * g.at(-letter).adjoint();
        }
    }
    return out;
}

PdFunction quasi_mult_function(const GeneratorAssignment& g, std::size_t n) {
    std::vector<std::pair<Word, Matrix>> values;
    for (const ClassCursor& nu : classes_up_to(g.context(), n)) {
        values.emplace_back(nu.rep(), quasi_mult(g, nu.rep()));
    }
    return PdFunction(g.context(), g.k(), Domain::ball(g.context(), n), values);
}

PdFunction haagerup(const GroupContext& ctx, std::size_t k, double t, std::size_t n) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw InputError("haagerup needs a finite t > 0");
    }
    const auto kk = static_cast<Eigen::Index>(k);
    std::vector<std::pair<Word, Matrix>> values;
    for (const ClassCursor& nu : classes_up_to(ctx, n)) {
        values.emplace_back(nu.rep(), std::exp(-t * static_cast<double>(nu.length())) * Matrix::Identity(kk, kk));
    }
    return PdFunction(ctx, k, Domain::ball(ctx, n), values);
}

} // namespace freepd

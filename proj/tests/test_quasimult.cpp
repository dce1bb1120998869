#include <doctest.h>

#include <cmath>
#include <random>

#include "freepd/error.hpp"
#include "freepd/extend.hpp"
#include "freepd/quasimult.hpp"
#include "support/random.hpp"

using namespace freepd;
using namespace freepd::testing;

namespace {

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

Word random_word(const GroupContext& ctx, std::size_t len, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(1, ctx.generators());
    std::bernoulli_distribution sign(0.5);
    std::vector<int> letters;
    while (letters.size() < len) {
        const int x = sign(rng) ? pick(rng) : -pick(rng);
        if (letters.empty() || letters.back() != -x) {
            letters.push_back(x);
        }
    }
    return Word(letters);
}

GeneratorAssignment random_assignment(const GroupContext& ctx, std::size_t k, std::mt19937_64& rng) {
    std::vector<Matrix> values;
    std::uniform_real_distribution<double> norm(0.1, 1.0);
    for (int i = 0; i < ctx.generators(); ++i) {
        values.push_back(random_contraction(k, k, norm(rng), rng));
    }
    return GeneratorAssignment(ctx, k, values);
}

} // namespace

TEST_CASE("quasi_mult examples") {
    const GroupContext ctx(2);
    const double t = 0.4;
    const GeneratorAssignment g = GeneratorAssignment::scalar(ctx, 2, std::exp(-t));
    for (const Word& w : ball(ctx, 3)) {
        CHECK(max_abs(quasi_mult(g, w) - std::exp(-t * static_cast<double>(w.size())) * Matrix::Identity(2, 2)) <= 1e-15);
    }
    CHECK(quasi_mult(g, Word{}) == Matrix::Identity(2, 2));

    const Matrix a1 = mat2(0.5, 0.3, 0.0, 0.5);
    const Matrix a2 = mat2(Complex(0.1, 0.2), 0.0, 0.3, -0.4);
    const GeneratorAssignment h(ctx, 2, {a1, a2});
    const Matrix expected = mat2(0.5 * Complex(0.1, 0.2) + 0.3 * 0.3, 0.3 * -0.4, 0.5 * 0.3, 0.5 * -0.4);
    CHECK(max_abs(quasi_mult(h, Word{1, 2}) - expected) <= 1e-15);
    CHECK(max_abs(quasi_mult(h, Word{-2, 1}) - a2.adjoint() * a1) <= 1e-15);

    CHECK_THROWS_AS(GeneratorAssignment(ctx, 1, {Matrix::Constant(1, 1, 1.01), Matrix::Constant(1, 1, 0.2)}), MathError);
    CHECK_THROWS_AS(GeneratorAssignment(ctx, 1, {Matrix::Constant(1, 1, 0.2)}), InputError);
}

TEST_CASE("haagerup examples") {
    const GroupContext ctx(2);
    const PdFunction h = haagerup(ctx, 1, std::log(2.0), 2);
    CHECK(h.domain() == Domain::ball(ctx, 2));
    for (const Word& w : ball(ctx, 2)) {
        CHECK(std::abs(h(w)(0, 0) - std::pow(0.5, static_cast<double>(w.size()))) <= 1e-15);
    }
    const PdFunction sharp = haagerup(ctx, 2, 20.0, 2);
    for (const Word& w : ball(ctx, 2)) {
        const Matrix delta = w.empty() ? Matrix(Matrix::Identity(2, 2)) : Matrix(Matrix::Zero(2, 2));
        CHECK(max_abs(sharp(w) - delta) <= 1e-8);
    }
    for (double t : {0.1, 1.0, 5.0}) {
        CHECK(verify_pd(haagerup(ctx, 1, t, 3)).positive);
        CHECK(verify_pd(haagerup(GroupContext(3), 2, t, 2)).positive);
    }
    CHECK_THROWS_AS(haagerup(ctx, 1, 0.0, 2), InputError);
    CHECK_THROWS_AS(haagerup(ctx, 1, -1.0, 2), InputError);
    CHECK_THROWS_AS(haagerup(ctx, 1, std::nan(""), 2), InputError);
}

TEST_CASE("quasi-multiplicativity") {
    const GroupContext ctx(3);
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        const GeneratorAssignment g = random_assignment(ctx, 1 + static_cast<std::size_t>(trial % 3), rng);
        const Word s = random_word(ctx, static_cast<std::size_t>(trial % 4), rng);
        const Word t = random_word(ctx, static_cast<std::size_t>(trial % 5), rng);
        if (mul(s, t).size() != s.size() + t.size()) {
            continue;
        }
        CHECK(max_abs(quasi_mult(g, mul(s, t)) - quasi_mult(g, s) * quasi_mult(g, t)) <= 1e-14);
        CHECK(max_abs(quasi_mult(g, s.inverse()) - quasi_mult(g, s).adjoint()) <= 1e-14);
    }
}

TEST_CASE("contractive assignments are positive definite") {
    const GroupContext ctx(2);
    std::mt19937_64 rng(62);
    Tolerance tol;
    tol.psd_eps = 1e-9;
    for (int trial = 0; trial < 6; ++trial) {
        const GeneratorAssignment g = random_assignment(ctx, 1 + static_cast<std::size_t>(trial % 2), rng);
        CHECK(verify_pd(quasi_mult_function(g, 4), tol).positive);
    }
}

TEST_CASE("quasi-multiplicative functions are central extensions") {
    const GroupContext ctx(2);
    std::mt19937_64 rng(63);
    std::vector<GeneratorAssignment> cases;
    for (double r : {0.3, 0.7, 0.95}) {
        cases.push_back(GeneratorAssignment::scalar(ctx, 1, r));
    }
    cases.push_back(random_assignment(ctx, 2, rng));
    cases.push_back(GeneratorAssignment(ctx, 2, {mat2(0.5, 0.3, 0.0, 0.5), mat2(0.0, 1.0, 0.0, 0.0)}));
    for (const GeneratorAssignment& g : cases) {
        const PdFunction full = quasi_mult_function(g, 4);
        const PdFunction central = extend_to_ball(full.restrict_to_ball(1), 4, zero_oracle()).function;
        double worst = 0.0;
        for (const Word& w : ball(ctx, 4)) {
            worst = std::max(worst, max_abs(central(w) - full(w)));
        }
        CHECK(worst <= 1e-8);
    }
}

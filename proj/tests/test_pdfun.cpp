#include <doctest.h>

#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "freepd/cayley.hpp"
#include "freepd/error.hpp"
#include "freepd/pdfun.hpp"
#include "freepd/quasimult.hpp"
#include "support/random.hpp"

using namespace freepd;
using namespace freepd::testing;

namespace {

Matrix scalar(Complex z) {
    return Matrix::Constant(1, 1, z);
}

PdFunction scalar_s1(const GroupContext& ctx, Complex a1, Complex a2) {
    const std::vector<std::pair<Word, Matrix>> v{{Word{}, scalar(1.0)}, {Word{1}, scalar(a1)}, {Word{2}, scalar(a2)}};
    return PdFunction(ctx, 1, Domain::ball(ctx, 1), v);
}

// Smallest eigenvalue over all maximal sets of diameter <= n inside S_n, found by clique enumeration.
double oracle_min_over_cliques(const PdFunction& phi, std::size_t n) {
    const std::vector<Word> vs = ball(phi.context(), n);
    const std::size_t size = vs.size();
    std::vector<std::vector<bool>> adj(size, std::vector<bool>(size, false));
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            adj[i][j] = i != j && distance(vs[i], vs[j]) <= n;
        }
    }
    double best = 1e300;
    std::function<void(std::vector<std::size_t>, std::vector<std::size_t>, std::vector<std::size_t>)> bk =
        [&](std::vector<std::size_t> r, std::vector<std::size_t> p, std::vector<std::size_t> x) {
            if (p.empty() && x.empty()) {
                std::vector<Word> set;
                for (std::size_t v : r) {
                    set.push_back(vs[v]);
                }
                best = std::min(best, oracle_min_eigenvalue(gram(phi, set).blocks));
                return;
            }
            while (!p.empty()) {
                const std::size_t v = p.back();
                std::vector<std::size_t> r2 = r, p2, x2;
                r2.push_back(v);
                for (std::size_t u : p) {
                    if (adj[v][u]) p2.push_back(u);
                }
                for (std::size_t u : x) {
                    if (adj[v][u]) x2.push_back(u);
                }
                bk(r2, p2, x2);
                p.pop_back();
                x.push_back(v);
            }
        };
    std::vector<std::size_t> all(size);
    std::iota(all.begin(), all.end(), 0);
    bk({}, all, {});
    return best;
}

} // namespace

TEST_CASE("domains") {
    const GroupContext ctx(2);
    const Domain b2 = Domain::ball(ctx, 2);
    CHECK(b2.is_ball());
    CHECK(b2.radius() == 2);
    CHECK(b2.contains(Word{-2, -1}));
    CHECK_FALSE(b2.contains(Word{1, 1, 1}));
    const Domain ideal = Domain::order_ideal(ClassCursor(ctx, Word{1, 1}));
    CHECK_FALSE(ideal.is_ball());
    CHECK(ideal.radius() == 1);
    CHECK(ideal.contains(Word{-1, -1}));
    CHECK_FALSE(ideal.contains(Word{1, 2}));
}

TEST_CASE("construction validates and normalizes") {
    const GroupContext ctx(2);
    const PdFunction phi = scalar_s1(ctx, 0.5, Complex(0.1, 0.2));
    CHECK(phi(Word{-2})(0, 0) == Complex(0.1, -0.2));
    CHECK(phi(Word{})(0, 0) == Complex(1.0, 0.0));
    CHECK_THROWS_AS(phi(Word{1, 1}), InputError);

    // value given at the inverse word
    const std::vector<std::pair<Word, Matrix>> inv{{Word{}, scalar(1.0)}, {Word{-1}, scalar(Complex(0, 1))}, {Word{2}, scalar(0.0)}};
    CHECK(PdFunction(ctx, 1, Domain::ball(ctx, 1), inv)(Word{1})(0, 0) == Complex(0, -1));

    const std::vector<std::pair<Word, Matrix>> missing{{Word{}, scalar(1.0)}, {Word{1}, scalar(0.5)}};
    CHECK_THROWS_AS(PdFunction(ctx, 1, Domain::ball(ctx, 1), missing), InputError);
    const std::vector<std::pair<Word, Matrix>> clash{
        {Word{}, scalar(1.0)}, {Word{1}, scalar(0.5)}, {Word{-1}, scalar(0.4)}, {Word{2}, scalar(0.0)}};
    CHECK_THROWS_AS(PdFunction(ctx, 1, Domain::ball(ctx, 1), clash), InputError);
    const std::vector<std::pair<Word, Matrix>> outside{
        {Word{}, scalar(1.0)}, {Word{1}, scalar(0.5)}, {Word{2}, scalar(0.0)}, {Word{1, 1}, scalar(0.0)}};
    CHECK_THROWS_AS(PdFunction(ctx, 1, Domain::ball(ctx, 1), outside), InputError);
    const std::vector<std::pair<Word, Matrix>> shape{{Word{}, Matrix::Identity(2, 2)}, {Word{1}, scalar(0.5)}, {Word{2}, scalar(0.0)}};
    CHECK_THROWS_AS(PdFunction(ctx, 1, Domain::ball(ctx, 1), shape), InputError);

    const std::vector<std::pair<Word, Matrix>> scaled{{Word{}, scalar(4.0)}, {Word{1}, scalar(2.0)}, {Word{2}, scalar(1.0)}};
    const PdFunction normalized(ctx, 1, Domain::ball(ctx, 1), scaled);
    CHECK(std::abs(normalized(Word{1})(0, 0) - 0.5) <= 1e-15);
    CHECK(std::abs(normalized(Word{2})(0, 0) - 0.25) <= 1e-15);
    const std::vector<std::pair<Word, Matrix>> singular{{Word{}, scalar(0.0)}, {Word{1}, scalar(0.0)}, {Word{2}, scalar(0.0)}};
    CHECK_THROWS_AS(PdFunction(ctx, 1, Domain::ball(ctx, 1), singular), MathError);
}

TEST_CASE("restriction, extension by one class, reordering") {
    const GroupContext ctx(2);
    std::mt19937_64 rng(1);
    const PdFunction phi = random_pd_function(ctx, 2, 2, rng);
    const PdFunction r1 = phi.restrict_to_ball(1);
    CHECK(r1.stored().size() == 3);
    CHECK(r1(Word{-2}) == phi(Word{-2}));
    CHECK_THROWS_AS(r1.restrict_to_ball(2), InputError);

    const PdFunction ext = r1.extended(phi(Word{1, 1}));
    CHECK(ext.domain().cutoff().rep() == Word{1, 1});
    CHECK(ext(Word{-1, -1}) == phi(Word{-1, -1}));

    const GroupContext other(2, {-2, 1, 2, -1});
    const PdFunction re = phi.with_order(other);
    for (const Word& w : ball(ctx, 2)) {
        CHECK(max_abs(re(w) - phi(w)) == 0.0);
    }
    CHECK_THROWS_AS(ext.with_order(other), InputError);
}

TEST_CASE("Gram matrices") {
    const GroupContext ctx(2);
    const PdFunction phi = scalar_s1(ctx, 0.5, Complex(0.0, 0.25));
    const std::vector<Word> idx{Word{}, Word{2}};
    const GramMatrix g = gram(phi, idx);
    CHECK(g.blocks(0, 0) == Complex(1.0, 0.0));
    CHECK(g.blocks(0, 1) == Complex(0.0, 0.25));
    CHECK(g.blocks(1, 0) == Complex(0.0, -0.25));
    const std::vector<Word> far{Word{1}, Word{2}};
    CHECK_THROWS_WITH_AS(gram(phi, far), doctest::Contains("s=[1]"), InputError);
}

TEST_CASE("positivity verdicts") {
    const GroupContext ctx(2);
    CHECK(verify_pd(scalar_s1(ctx, 0.5, Complex(0.0, 0.9))).positive);
    const PdVerdict bad = verify_pd(scalar_s1(ctx, 1.2, 0.0));
    CHECK_FALSE(bad.positive);
    CHECK(bad.min_eigenvalue == doctest::Approx(-0.2));
    CHECK(bad.witness == std::vector<Word>{Word{}, Word{1}});

    for (double t : {0.1, 1.0, 5.0}) {
        CHECK(verify_pd(haagerup(ctx, 1, t, 4)).positive);
    }
    CHECK_THROWS_AS(verify_pd(scalar_s1(ctx, 0.5, 0.5), {}, 2), InputError);
}

TEST_CASE("witness sets decide positivity exactly") {
    const GroupContext ctx(2);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unif(-0.7, 0.7);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
        PdFunction phi = random_pd_function(ctx, 1, n, rng, 0.05);
        if (trial % 3 != 0) {
            // perturb a positive function, which often breaks positivity
            std::vector<std::pair<Word, Matrix>> v;
            for (const auto& [w, m] : phi.entries()) {
                v.emplace_back(w, w.empty() ? m : Matrix(m + scalar(Complex(unif(rng), unif(rng)) * 0.3)));
            }
            phi = PdFunction(ctx, 1, Domain::ball(ctx, n), v);
        }
        const PdVerdict verdict = verify_pd(phi);
        const double oracle = oracle_min_over_cliques(phi, n);
        CHECK(verdict.min_eigenvalue == doctest::Approx(oracle).epsilon(1e-9));
        CHECK(verdict.positive == (oracle >= -1e-10));
    }
}

TEST_CASE("Toeplitz correspondence") {
    const GroupContext ctx(2);
    std::mt19937_64 rng(2);
    const PdFunction phi = random_pd_function(ctx, 2, 2, rng);
    const GramMatrix m = toeplitz_of(phi, 1);
    CHECK(m.index.size() == 5);
    const PdFunction back = function_of_toeplitz(m, ctx);
    CHECK(back.stored() == phi.stored());
    const GramMatrix m2 = toeplitz_of(back, 1);
    CHECK(m2.blocks == m.blocks);
    CHECK_THROWS_AS(toeplitz_of(phi, 2), InputError);

    GramMatrix broken = m;
    broken.blocks(0, 2) += 0.01;
    broken.blocks(2, 0) += 0.01;
    CHECK_THROWS_AS(function_of_toeplitz(broken, ctx), InputError);

    // Toeplitz but not PSD: phi(a1) = 2
    const PdFunction big = [&] {
        std::vector<std::pair<Word, Matrix>> v;
        for (const ClassCursor& nu : classes_up_to(ctx, 2)) {
            v.emplace_back(nu.rep(), nu.rep() == Word{1} ? scalar(2.0) : scalar(nu.is_unit() ? 1.0 : 0.0));
        }
        return PdFunction(ctx, 1, Domain::ball(ctx, 2), v);
    }();
    CHECK_THROWS_AS(function_of_toeplitz(toeplitz_of(big, 1), ctx), NotPositiveError);

    GramMatrix odd = m;
    odd.index[1] = Word{1, 1};
    CHECK_THROWS_AS(function_of_toeplitz(odd, ctx), InputError);
}

TEST_CASE("Kolmogorov vectors reproduce the function") {
    const GroupContext ctx(2);
    std::mt19937_64 rng(6);
    const PdFunction phi = random_pd_function(ctx, 2, 2, rng);
    const KolmogorovData kd = kolmogorov(phi, 1);
    for (std::size_t i = 0; i < kd.index.size(); ++i) {
        for (std::size_t j = 0; j < kd.index.size(); ++j) {
            const Matrix expected = phi(mul(kd.index[i].inverse(), kd.index[j]));
            CHECK(max_abs(kd.vector(i).adjoint() * kd.vector(j) - expected) <= 1e-12);
        }
    }
}

TEST_CASE("radialization") {
    const GroupContext ctx(2);
    const PdFunction h = haagerup(ctx, 2, 0.4, 3);
    const PdFunction rh = radialize(h);
    for (const Word& w : ball(ctx, 3)) {
        CHECK(max_abs(rh(w) - h(w)) <= 1e-15);
    }
    std::mt19937_64 rng(13);
    for (std::size_t k : {1, 2}) {
        const PdFunction phi = random_pd_function(ctx, k, 2, rng);
        const PdFunction r = radialize(phi);
        CHECK(verify_pd(r).positive);
        for (std::size_t len = 1; len <= 2; ++len) {
            const std::vector<Word> s = sphere(ctx, len);
            Matrix mean = Matrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
            for (const Word& w : s) {
                mean += phi(w);
            }
            mean /= static_cast<double>(s.size());
            for (const Word& w : s) {
                CHECK(max_abs(r(w) - mean) <= 1e-14);
            }
        }
    }
}

#include <doctest.h>

#include <random>

#include "freepd/error.hpp"
#include "freepd/linalg.hpp"
#include "support/random.hpp"

using namespace freepd;
using namespace freepd::testing;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (const Complex& z : r) {
            m(i, j++) = z;
        }
        ++i;
    }
    return m;
}

} // namespace

TEST_CASE("eigen decomposition of small fixtures") {
    const EigenDecomposition id = eig_hermitian(Matrix::Identity(3, 3));
    CHECK(max_abs(id.values - RealVector::Ones(3)) == 0.0);

    const EigenDecomposition e = eig_hermitian(mat({{2.0, 1.0}, {1.0, 2.0}}));
    CHECK(e.values(0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.values(1) == doctest::Approx(1.0).epsilon(1e-14));

    const Complex i(0.0, 1.0);
    const EigenDecomposition p = eig_hermitian(mat({{0.0, i}, {-i, 0.0}}));
    CHECK(p.values(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.values(1) == doctest::Approx(-1.0).epsilon(1e-14));

    CHECK_THROWS_AS(eig_hermitian(mat({{1.0, 2.0}, {0.0, 1.0}})), InputError);
    CHECK_THROWS_AS(eig_hermitian(mat({{std::nan(""), 0.0}, {0.0, 1.0}})), InputError);
}

TEST_CASE("eigen decomposition matches an independent solver") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index n = 1 + trial % 25;
        Matrix a = random_hermitian(n, rng);
        if (trial % 3 == 0) {
            a = random_psd(n, std::max<Eigen::Index>(1, n / 2), rng);
            a = (a + a.adjoint()) / 2.0;
        }
        const EigenDecomposition e = eig_hermitian(a);
        const double norm = std::max(1.0, a.norm());
        CHECK(max_abs(a * e.vectors - e.vectors * e.values.asDiagonal()) <= 1e-9 * norm);
        CHECK(max_abs(e.vectors.adjoint() * e.vectors - Matrix::Identity(n, n)) <= 1e-10);
        for (Eigen::Index k = 1; k < n; ++k) {
            CHECK(e.values(k - 1) >= e.values(k));
        }
        Eigen::SelfAdjointEigenSolver<Matrix> oracle(a, Eigen::EigenvaluesOnly);
        CHECK(max_abs(Matrix(e.values.reverse().cast<Complex>()) - Matrix(oracle.eigenvalues().cast<Complex>())) <= 1e-10 * norm);

        // warm start from a perturbed basis lands on the same spectrum
        const EigenDecomposition w = eig_hermitian(a, e.vectors + 1e-3 * gaussian(n, n, rng));
        CHECK(max_abs(Matrix((w.values - e.values).cast<Complex>())) <= 1e-10 * norm);
        CHECK(max_abs(a * w.vectors - w.vectors * w.values.asDiagonal()) <= 1e-9 * norm);
    }
}

TEST_CASE("eigen decomposition is deterministic") {
    std::mt19937_64 rng(4);
    const Matrix a = random_hermitian(12, rng);
    const EigenDecomposition e1 = eig_hermitian(a);
    const EigenDecomposition e2 = eig_hermitian(a);
    CHECK(e1.values == e2.values);
    CHECK(e1.vectors == e2.vectors);
}

TEST_CASE("positive semidefinite test") {
    CHECK(is_psd(Matrix::Identity(4, 4)));
    CHECK_FALSE(is_psd(mat({{1.0, 2.0}, {2.0, 1.0}})));
    CHECK(is_psd(Matrix::Zero(3, 3)));
    CHECK(is_psd(mat({{1.0, 0.0}, {0.0, -1e-12}})));
    CHECK_FALSE(is_psd(mat({{1.0, 0.0}, {0.0, -1e-8}})));
    CHECK_THROWS_AS(is_psd(mat({{1.0, 1.0}, {0.0, 1.0}})), InputError);
    Tolerance loose;
    loose.psd_eps = 1e-6;
    CHECK(is_psd(mat({{1.0, 0.0}, {0.0, -1e-8}}), loose));
    Tolerance bad;
    bad.rank_eps = 0.0;
    CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("Gram factor") {
    const Matrix w1 = gram_factor(Matrix::Identity(3, 3));
    CHECK(max_abs(w1.adjoint() * w1 - Matrix::Identity(3, 3)) <= 1e-14);

    const Matrix w2 = gram_factor(mat({{1.0, 1.0}, {1.0, 1.0}}));
    CHECK(w2.rows() == 1);
    CHECK(std::abs(w2(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(w2(0, 0) - w2(0, 1)) <= 1e-14);

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = 2 + trial % 12;
        const Eigen::Index r = 1 + trial % n;
        const Matrix a = random_psd(n, r, rng);
        const Matrix w = gram_factor(a);
        CHECK(w.rows() == r);
        CHECK(max_abs(w.adjoint() * w - a) <= 1e-9 * spectral_norm(a));
    }
    CHECK_THROWS_AS(gram_factor(mat({{1.0, 2.0}, {2.0, 1.0}})), NotPositiveError);
}

TEST_CASE("pseudo-inverse") {
    CHECK(max_abs(pinv(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)) <= 1e-14);
    CHECK(max_abs(pinv(Matrix::Zero(2, 3))) == 0.0);
    CHECK(pinv(Matrix::Zero(2, 3)).rows() == 3);
    CHECK(max_abs(pinv(mat({{2.0, 0.0}, {0.0, 0.0}})) - mat({{0.5, 0.0}, {0.0, 0.0}})) <= 1e-15);

    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index rows = 1 + trial % 7;
        const Eigen::Index cols = 1 + (trial * 3) % 6;
        const Eigen::Index rank = 1 + trial % std::min(rows, cols);
        const Matrix a = gaussian(rows, rank, rng) * gaussian(rank, cols, rng);
        const Matrix p = pinv(a);
        const double s = std::max(1.0, spectral_norm(a));
        const double sp = std::max(1.0, spectral_norm(p));
        CHECK(max_abs(a * p * a - a) <= 1e-9 * s);
        CHECK(max_abs(p * a * p - p) <= 1e-9 * sp);
        CHECK(max_abs(Matrix(a * p) - Matrix((a * p).adjoint())) <= 1e-9 * s * sp);
        CHECK(max_abs(Matrix(p * a) - Matrix((p * a).adjoint())) <= 1e-9 * s * sp);
        CHECK(max_abs(p - oracle_pinv(a)) <= 1e-8 * sp);
    }
}

TEST_CASE("PSD projection") {
    CHECK(max_abs(psd_project(mat({{1.0, 0.0}, {0.0, -1.0}})) - mat({{1.0, 0.0}, {0.0, 0.0}})) <= 1e-15);
    CHECK(max_abs(psd_project(-Matrix::Identity(3, 3))) <= 1e-15);
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix psd = random_psd(6, 3, rng);
        CHECK(max_abs(psd_project(psd) - psd) <= 1e-12 * spectral_norm(psd));
        const Matrix a = random_hermitian(6, rng);
        const Matrix b = random_hermitian(6, rng);
        const Matrix pa = psd_project(a);
        CHECK(is_psd(pa));
        CHECK(max_abs(psd_project(pa) - pa) <= 1e-12 * spectral_norm(a));
        CHECK((pa - psd_project(b)).norm() <= (a - b).norm() + 1e-12);
    }
}

TEST_CASE("spectral norm and extreme eigenvalues") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = gaussian(3 + trial % 4, 2 + trial % 5, rng);
        Eigen::JacobiSVD<Matrix> svd(a);
        CHECK(spectral_norm(a) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-12));
        const Matrix h = random_hermitian(5, rng);
        CHECK(min_eigenvalue(h) == doctest::Approx(oracle_min_eigenvalue(h)).epsilon(1e-12));
    }
    CHECK(spectral_norm(Matrix(0, 3)) == 0.0);
}

#include <doctest.h>

#include <rbmlab/grassmann.hpp>
#include <rbmlab/rng.hpp>
#include <rbmlab/supermatrix.hpp>

#include <Eigen/Dense>
#include <complex>
#include <vector>

using cd = std::complex<double>;
using rbmlab::GradedMatrix;
using rbmlab::GrassmannElement;
using rbmlab::SuperMatrix;

namespace {

double normal(std::mt19937_64& rng) {
    std::normal_distribution<double> d(0.0, 1.0);
    return d(rng);
}

// Random even entry c0 + c2 * (g_{2k} g_{2k+1}) to keep the soul generic.
GrassmannElement random_even(std::mt19937_64& rng, int n_gen, int pair) {
    auto e = GrassmannElement::scalar(n_gen, cd(normal(rng), normal(rng)));
    auto g1 = GrassmannElement::generator(n_gen, 2 * pair);
    auto g2 = GrassmannElement::generator(n_gen, 2 * pair + 1);
    e += cd(normal(rng), normal(rng)) * (g1 * g2);
    return e;
}

// Random (1|1) supermatrix with invertible blocks using four generators.
SuperMatrix random_super11(std::mt19937_64& rng) {
    const int n_gen = 4;
    SuperMatrix m(1, 1, n_gen);
    m.a.at(0, 0) = GrassmannElement::scalar(n_gen, cd(2.5 + 0.5 * normal(rng), normal(rng)));
    m.b.at(0, 0) = GrassmannElement::scalar(n_gen, cd(2.5 + 0.5 * normal(rng), normal(rng)));
    auto g0 = GrassmannElement::generator(n_gen, 0);
    auto g1 = GrassmannElement::generator(n_gen, 1);
    m.a.at(0, 0) += cd(normal(rng), normal(rng)) * (g0 * g1);
    m.b.at(0, 0) += cd(normal(rng), normal(rng)) * (g0 * g1);
    auto g2 = GrassmannElement::generator(n_gen, 2);
    auto g3 = GrassmannElement::generator(n_gen, 3);
    m.sigma.at(0, 0) = cd(normal(rng), normal(rng)) * g2;
    m.rho.at(0, 0) = cd(normal(rng), normal(rng)) * g3;
    return m;
}

}  // namespace

TEST_SUITE("supermatrix") {

TEST_CASE("graded determinant matches Eigen on numeric matrices") {
    auto rng = rbmlab::make_stream(91, 0);
    for (int n = 1; n <= 4; ++n) {
        Eigen::MatrixXcd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = cd(normal(rng), normal(rng));
        auto gm = GradedMatrix::from_complex(m, 0);
        CHECK(std::abs(gm.determinant().body() - m.determinant()) < 1e-12);
    }
}

TEST_CASE("graded inverse against identity, with even souls") {
    auto rng = rbmlab::make_stream(92, 0);
    const int n_gen = 6;
    GradedMatrix m(2, 2, n_gen);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            m.at(i, j) = random_even(rng, n_gen, (i * 2 + j) % 3);
        }
    // shift the diagonal body so the matrix is comfortably invertible
    m.at(0, 0) += GrassmannElement::scalar(n_gen, cd(4.0, 0.0));
    m.at(1, 1) += GrassmannElement::scalar(n_gen, cd(4.0, 0.0));
    CHECK(m.all_even());
    auto inv = m.inverse();
    auto prod = m * inv;
    auto id = GradedMatrix::identity(2, n_gen);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            CHECK((prod.at(i, j) - id.at(i, j)).is_zero(1e-12));
        }
}

TEST_CASE("supertrace of a product is cyclic") {
    auto rng = rbmlab::make_stream(93, 0);
    for (int rep = 0; rep < 8; ++rep) {
        auto m = random_super11(rng);
        auto n = random_super11(rng);
        auto lhs = (m * n).str();
        auto rhs = (n * m).str();
        CHECK((lhs - rhs).is_zero(1e-12));
    }
}

TEST_CASE("superdeterminant is multiplicative") {
    auto rng = rbmlab::make_stream(94, 0);
    for (int rep = 0; rep < 10; ++rep) {
        auto m = random_super11(rng);
        auto n = random_super11(rng);
        auto lhs = (m * n).sdet();
        auto rhs = m.sdet() * n.sdet();
        CHECK((lhs - rhs).is_zero(1e-10));
    }
}

TEST_CASE("sdet of the inverse is the reciprocal") {
    auto rng = rbmlab::make_stream(95, 0);
    for (int rep = 0; rep < 6; ++rep) {
        auto m = random_super11(rng);
        auto prod = m.sdet() * m.inverse().sdet();
        auto one = GrassmannElement::scalar(4, 1.0);
        CHECK((prod - one).is_zero(1e-10));
    }
}

TEST_CASE("block inverse solves M M^{-1} = 1 on (1|1)") {
    auto rng = rbmlab::make_stream(96, 0);
    for (int rep = 0; rep < 6; ++rep) {
        auto m = random_super11(rng);
        auto inv = m.inverse();
        auto prod = m * inv;
        auto one = GrassmannElement::scalar(4, 1.0);
        auto zero = GrassmannElement(4);
        CHECK((prod.a.at(0, 0) - one).is_zero(1e-11));
        CHECK((prod.b.at(0, 0) - one).is_zero(1e-11));
        CHECK((prod.sigma.at(0, 0) - zero).is_zero(1e-11));
        CHECK((prod.rho.at(0, 0) - zero).is_zero(1e-11));
    }
}

TEST_CASE("diagonal numeric supermatrix has sdet a/b and str a-b") {
    const cd a(1.5, 0.5), b(2.0, -1.0);
    SuperMatrix m(1, 1, 0);
    m.a.at(0, 0) = GrassmannElement::scalar(0, a);
    m.b.at(0, 0) = GrassmannElement::scalar(0, b);
    CHECK(std::abs(m.sdet().body() - a / b) < 1e-14);
    CHECK(std::abs(m.str().body() - (a - b)) < 1e-14);
}

TEST_CASE("scalar identity and subtraction") {
    auto m = SuperMatrix::scalar_identity(2, 1, 2, cd(3.0, 0.0));
    auto n = SuperMatrix::scalar_identity(2, 1, 2, cd(1.0, 0.0));
    auto d = m - n;
    CHECK(std::abs(d.a.at(0, 0).body() - 2.0) < 1e-15);
    CHECK(std::abs(d.a.at(1, 1).body() - 2.0) < 1e-15);
    CHECK(std::abs(d.b.at(0, 0).body() - 2.0) < 1e-15);
    CHECK(d.a.at(0, 1).is_zero());
    CHECK(std::abs(d.str().body() - 2.0) < 1e-15);  // 2+2-2
    // sdet of c * id_(2|1) = c^{2-1}
    CHECK(std::abs(m.sdet().body() - 3.0) < 1e-12);
}

}

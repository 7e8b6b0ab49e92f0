#include <doctest.h>

#include <rbmlab/potential.hpp>
#include <rbmlab/saddle.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

using cd = std::complex<double>;
using rbmlab::d_term;
using rbmlab::d_term_quadrature;
using rbmlab::potential_v;
using rbmlab::potential_v_quadrature;
using rbmlab::saddle_data;

TEST_SUITE("potential") {

TEST_CASE("V vanishes cubically at the origin") {
    for (double E : {0.5, 1.0, 1.5}) {
        auto s = saddle_data(E);
        CHECK(potential_v(cd(0.0, 0.0), s) == cd(0.0, 0.0));
        // V(x) = (calE x)^3/3 + O(x^4)
        cd x(1e-4, 0.0);
        cd lead = std::pow(s.calE * x, 3) / 3.0;
        CHECK(std::abs(potential_v(x, s) - lead) / std::abs(lead) < 1e-4);
        cd xi(0.0, 1e-4);
        cd leadi = std::pow(s.calE * xi, 3) / 3.0;
        CHECK(std::abs(potential_v(xi, s) - leadi) / std::abs(leadi) < 1e-4);
    }
}

TEST_CASE("series and closed form agree with the t-integral") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> box(-1.5, 1.5);
    for (double E : {0.5, 1.0, 1.5, -0.7}) {
        auto s = saddle_data(E);
        for (int t = 0; t < 60; ++t) {
            cd x(box(rng), box(rng));
            cd a = potential_v(x, s);
            cd b = potential_v_quadrature(x, s);
            CHECK(std::abs(a - b) <= 1e-10 * (1.0 + std::abs(a)));
        }
        // real and purely imaginary arguments, straddling the |u| = 1/2 seam
        for (double v : {-1.2, -0.45, 0.3, 0.49, 0.51, 0.9, 1.4}) {
            cd xr(v, 0.0), xi(0.0, v);
            CHECK(std::abs(potential_v(xr, s) - potential_v_quadrature(xr, s)) < 1e-10);
            CHECK(std::abs(potential_v(xi, s) - potential_v_quadrature(xi, s)) < 1e-10);
        }
    }
}

TEST_CASE("E = 0 pole line on the imaginary axis") {
    auto s0 = saddle_data(0.0);
    // u = calE x = -i x is real for x = i b; b = 1 hits the branch point
    CHECK_THROWS_AS(potential_v(cd(0.0, 1.0), s0), std::domain_error);
    CHECK_THROWS_AS(potential_v(cd(0.0, 1.5), s0), std::domain_error);
    CHECK_NOTHROW(potential_v(cd(0.0, 0.5), s0));
    CHECK_NOTHROW(potential_v(cd(0.0, -1.5), s0));  // u < 0 side is regular
    // away from E = 0 the same arguments are fine
    auto s1 = saddle_data(1.0);
    CHECK_NOTHROW(potential_v(cd(0.0, 1.0), s1));
}

TEST_CASE("soul coefficient D vanishes at the saddle origin") {
    for (double E : {0.5, 1.0, 1.5}) {
        auto s = saddle_data(E);
        // D(0,0) = calE^2 - 1/calE_bar^2 = 0 since calE calE_bar = 1
        CHECK(std::abs(d_term(cd(0, 0), cd(0, 0), s)) < 1e-14);
    }
}

TEST_CASE("D closed form equals its t-integral form") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> box(-1.0, 1.0);
    for (double E : {0.5, 1.0, 1.5}) {
        auto s = saddle_data(E);
        for (int t = 0; t < 50; ++t) {
            cd a(box(rng), 0.0), b(box(rng), 0.0);  // fields are real
            cd lhs = d_term(a, b, s);
            cd rhs = d_term_quadrature(a, b, s);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
        }
    }
}

TEST_CASE("script V sums site potentials with the ib twist") {
    auto s = saddle_data(1.0);
    Eigen::VectorXd a(3), b(3);
    a << 0.2, -0.4, 0.9;
    b << -0.1, 0.5, 0.3;
    cd expect = 0.0;
    for (int j = 0; j < 3; ++j)
        expect += potential_v(cd(a[j], 0.0), s) - potential_v(cd(0.0, b[j]), s);
    CHECK(std::abs(rbmlab::script_v(a, b, s) - expect) < 1e-13);
}

TEST_CASE("remainder R reduces to exp(script V) when B = 0") {
    auto s = saddle_data(1.0);
    Eigen::VectorXd a(2), b(2);
    a << 0.3, -0.2;
    b << 0.1, 0.4;
    Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(2, 2);
    auto r = rbmlab::remainder_r(a, b, s, zero);
    cd expect = std::exp(rbmlab::script_v(a, b, s));
    CHECK(std::abs(r.value - expect) < 1e-13);
}

}

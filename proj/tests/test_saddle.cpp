#include <doctest.h>

#include <rbmlab/saddle.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <stdexcept>

using cd = std::complex<double>;
using rbmlab::saddle_data;

TEST_SUITE("saddle") {

TEST_CASE("values at E = 1") {
    auto s = saddle_data(1.0);
    const double rt3_2 = std::sqrt(3.0) / 2.0;
    CHECK(s.calE.real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.calE.imag() == doctest::Approx(-rt3_2).epsilon(1e-15));
    CHECK(s.mr2 == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(s.mi2 == doctest::Approx(rt3_2).epsilon(1e-15));
    CHECK(s.sigma_e == 1);
    CHECK(s.rho_sc == doctest::Approx(std::sqrt(3.0) / (2.0 * M_PI)).epsilon(1e-15));
    CHECK(s.rho_sc == doctest::Approx(0.275664447710896).epsilon(1e-12));
}

TEST_CASE("values at E = 0") {
    auto s = saddle_data(0.0);
    CHECK(s.calE == cd(0.0, -1.0));
    CHECK(s.mr2 == doctest::Approx(2.0));
    CHECK(s.mi2 == doctest::Approx(0.0));
    CHECK(s.sigma_e == 1);  // sign convention: +1 at E = 0
    CHECK(s.rho_sc == doctest::Approx(1.0 / M_PI).epsilon(1e-15));
}

TEST_CASE("algebraic relations hold across the band") {
    for (double E : {-1.9, -1.5, -0.3, 0.0, 0.4, 1.0, 1.7, 1.99}) {
        auto s = saddle_data(E);
        // calE solves z(E - z) = 1, and E - calE is the conjugate root
        CHECK(std::abs(s.calE * (E - s.calE) - cd(1.0, 0.0)) < 1e-14);
        CHECK(std::abs(s.calE_bar - std::conj(s.calE)) < 1e-15);
        CHECK(std::abs(s.calE * s.calE_bar - cd(1.0, 0.0)) < 1e-14);
        CHECK(std::abs(s.calE) == doctest::Approx(1.0).epsilon(1e-14));
        // saddle values: a pair on the unit circle, b pair at -i times it
        CHECK(s.a_plus == s.calE);
        CHECK(s.a_minus == s.calE_bar);
        CHECK(std::abs(s.b_plus - cd(0.0, -1.0) * s.a_plus) < 1e-15);
        CHECK(std::abs(s.b_minus - cd(0.0, -1.0) * s.a_minus) < 1e-15);
        // masses
        CHECK(s.mr2 == doctest::Approx(2.0 * s.ei * s.ei).epsilon(1e-13));
        CHECK(s.mi2 == doctest::Approx(std::abs(E) * s.ei).epsilon(1e-13));
        CHECK(s.mr2 > 0.0);
        CHECK(s.mi2 >= 0.0);
        CHECK(s.sigma_e == (E < 0.0 ? -1 : 1));
        CHECK(s.rho_sc == doctest::Approx(rbmlab::semicircle_density(E)).epsilon(1e-15));
    }
}

TEST_CASE("band edge rejected, density vanishes outside") {
    CHECK_THROWS_AS(saddle_data(2.0), std::domain_error);
    CHECK_THROWS_AS(saddle_data(-2.0), std::domain_error);
    CHECK_THROWS_AS(saddle_data(2.5), std::domain_error);
    CHECK(rbmlab::semicircle_density(2.0) == 0.0);
    CHECK(rbmlab::semicircle_density(2.5) == 0.0);
    CHECK(rbmlab::semicircle_density(-3.0) == 0.0);
    CHECK(rbmlab::semicircle_density(0.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-15));
}

TEST_CASE("broadened semicircle matches the Lorentzian convolution") {
    // oracle: direct convolution of the semicircle with the eps-Lorentzian
    auto convolved = [](double E, double eps) {
        return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double l) {
                double d = E - l;
                return rbmlab::semicircle_density(l) * eps / (M_PI * (d * d + eps * eps));
            },
            -2.0, 2.0, 12, 1e-13);
    };
    for (double eps : {0.05, 0.2}) {
        for (double E : {0.0, 0.5, 1.0, 1.5, 1.9, 2.3, -0.7}) {
            double closed = rbmlab::broadened_semicircle_density(E, eps);
            CHECK(closed == doctest::Approx(convolved(E, eps)).epsilon(1e-10));
            CHECK(closed > 0.0);
            // symmetric in E
            CHECK(closed == doctest::Approx(rbmlab::broadened_semicircle_density(-E, eps))
                                .epsilon(1e-14));
        }
    }
    // smearing lowers the bulk density, leaks mass outside the band
    CHECK(rbmlab::broadened_semicircle_density(0.0, 0.05) < 1.0 / M_PI);
    CHECK(rbmlab::broadened_semicircle_density(1.0, 0.05) < rbmlab::semicircle_density(1.0));
    CHECK(rbmlab::broadened_semicircle_density(3.0, 0.05) > 0.0);
    // eps -> 0 recovers the semicircle in the bulk
    CHECK(std::abs(rbmlab::broadened_semicircle_density(1.0, 1e-7) -
                   rbmlab::semicircle_density(1.0)) < 1e-6);
    CHECK_THROWS_AS(rbmlab::broadened_semicircle_density(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rbmlab::broadened_semicircle_density(1.0, -0.1), std::invalid_argument);
}

}

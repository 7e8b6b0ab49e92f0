#include <doctest.h>

#include <rbmlab/covariance.hpp>
#include <rbmlab/ensemble.hpp>
#include <rbmlab/lattice.hpp>
#include <rbmlab/linalg.hpp>
#include <rbmlab/rng.hpp>
#include <rbmlab/saddle.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

using cd = std::complex<double>;
using rbmlab::covariance;
using rbmlab::CovKind;
using rbmlab::TorusLattice;

namespace {

Eigen::VectorXd j_profile(const TorusLattice& lat) {
    return covariance(CovKind::J, lat).profile.real();
}

}  // namespace

TEST_SUITE("ensemble") {

TEST_CASE("samples are exactly Hermitian with centered entries") {
    TorusLattice lat(4, 2);
    auto prof = j_profile(lat);
    auto rng = rbmlab::make_stream(1, 0);
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(16, 16);
    const int n_draws = 2000;
    for (int t = 0; t < n_draws; ++t) {
        Eigen::MatrixXcd H = rbmlab::sample_band_matrix(lat, prof, rng);
        CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        sum += H;
    }
    // E[H] = 0: entry sd is sqrt(J_ij) <= 1, so mean sd <= 1/sqrt(n_draws)
    CHECK((sum / double(n_draws)).cwiseAbs().maxCoeff() < 5.0 / std::sqrt(double(n_draws)));
}

TEST_CASE("entry second moments reproduce J within 3 SE") {
    TorusLattice lat(4, 2);
    auto prof = j_profile(lat);
    auto rng = rbmlab::make_stream(2, 0);
    const int n = lat.volume();
    const long n_draws = 100000;
    Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd m4 = Eigen::MatrixXd::Zero(n, n);
    for (long t = 0; t < n_draws; ++t) {
        Eigen::MatrixXcd H = rbmlab::sample_band_matrix(lat, prof, rng);
        Eigen::ArrayXXd a2 = H.cwiseAbs2().array();
        m2 += a2.matrix();
        m4 += (a2 * a2).matrix();
    }
    m2 /= double(n_draws);
    m4 /= double(n_draws);
    int worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double target = prof[lat.index(lat.coords(i)[0] - lat.coords(j)[0],
                                           lat.coords(i)[1] - lat.coords(j)[1])];
            double var = std::max(m4(i, j) - m2(i, j) * m2(i, j), 0.0);
            double se = std::sqrt(var / double(n_draws));
            if (std::abs(m2(i, j) - target) > 3.0 * se) ++worst;
        }
    // 256 correlated tests at 3 sigma: a couple of outliers would be normal,
    // but the families are highly correlated, so demand near-zero
    CHECK(worst <= 3);
}

TEST_CASE("resolvent of H = 0 and the eigenvalue-sum identity") {
    Eigen::VectorXd zeros = Eigen::VectorXd::Zero(7);
    cd t = rbmlab::resolvent_trace_from_eigs(zeros, 0.8, 0.3);
    CHECK(std::abs(t - 1.0 / cd(0.8, 0.3)) < 1e-15);

    // -Im(trace)/pi equals the Lorentzian-broadened eigenvalue sum exactly
    auto rng = rbmlab::make_stream(3, 0);
    TorusLattice lat(4, 1);
    auto prof = j_profile(lat);
    for (int rep = 0; rep < 5; ++rep) {
        Eigen::MatrixXcd H = rbmlab::sample_band_matrix(lat, prof, rng);
        Eigen::VectorXd eigs = rbmlab::linalg::hermitian_eigenvalues(H);
        for (double E : {-1.0, 0.3, 1.2}) {
            cd tr = rbmlab::resolvent_trace_from_eigs(eigs, E, 0.05);
            CHECK(tr.imag() < 0.0);  // strict for eps > 0
            double rho = rbmlab::broadened_dos_from_eigs(eigs, E, 0.05);
            CHECK(std::abs(-tr.imag() / M_PI - rho) < 1e-10);
        }
    }
}

TEST_CASE("stochastic trace agrees with the exact one within 3 probe SE") {
    TorusLattice lat(8, 2);
    auto prof = j_profile(lat);
    auto rng = rbmlab::make_stream(4, 0);
    Eigen::MatrixXcd H = rbmlab::sample_band_matrix(lat, prof, rng);
    Eigen::VectorXd eigs = rbmlab::linalg::hermitian_eigenvalues(H);
    cd exact = rbmlab::resolvent_trace_from_eigs(eigs, 1.0, 0.05);
    auto st = rbmlab::stochastic_resolvent_trace(H, 1.0, 0.05, 64, rng);
    CHECK(std::abs(st.mean.real() - exact.real()) <= 3.0 * st.se_re);
    CHECK(std::abs(st.mean.imag() - exact.imag()) <= 3.0 * st.se_im);
    CHECK(st.se_re > 0.0);
}

TEST_CASE("averaged DOS: determinism, positivity, spectral leak at E = 3") {
    rbmlab::EnsembleConfig cfg;
    cfg.L = 6;
    cfg.W = 2;
    cfg.n_samples = 200;
    cfg.seed = 11;
    std::vector<double> energies{0.0, 1.0, 3.0};
    auto a = rbmlab::averaged_dos(cfg, energies, 0.05);
    auto b = rbmlab::averaged_dos(cfg, energies, 0.05);
    REQUIRE(a.size() == 3);
    for (size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].trace_mean == b[k].trace_mean);  // bitwise determinism
        CHECK(a[k].rho >= -3.0 * a[k].rho_se);
        CHECK(a[k].rho_se >= 0.0);
        CHECK(a[k].n_samples == 200);
    }
    CHECK(a[2].rho <= 0.02);  // E = 3 sits outside the spectrum; only the
                              // Lorentzian tail leaks in
    CHECK(a[0].rho == doctest::Approx(1.0 / M_PI).epsilon(0.15));
}

TEST_CASE("scan reports negative log-log error slope for shrinking errors") {
    // synthetic check of the slope fit through the public scan interface:
    // W in {2, 4} at small L with matched seeds; slope sign is data driven,
    // so only shape of the output is asserted here
    rbmlab::EnsembleConfig c1, c2;
    c1.L = 8;
    c1.W = 2;
    c1.n_samples = 40;
    c1.seed = 5;
    c2 = c1;
    c2.L = 16;
    c2.W = 4;
    auto scan = rbmlab::dos_error_scan({c1, c2}, {0.5, 1.0}, 0.05);
    CHECK(scan.rows.size() == 4);
    CHECK(scan.err_slopes.size() == 2);
    for (auto& row : scan.rows) {
        CHECK(row.est.rho_se >= 0.0);
        CHECK(std::isfinite(row.est.abs_err));
        CHECK(row.est.rho_sc == doctest::Approx(rbmlab::semicircle_density(row.est.E)));
        // error is measured against the reference at matched broadening
        CHECK(row.est.rho_sc_eps ==
              rbmlab::broadened_semicircle_density(row.est.E, row.est.eps));
        CHECK(row.est.abs_err == std::abs(row.est.rho - row.est.rho_sc_eps));
    }
    for (auto& [E, slope] : scan.err_slopes) CHECK(std::isfinite(slope));
}

}

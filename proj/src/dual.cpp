#include "rbmlab/dual.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "rbmlab/ensemble.hpp"
#include "rbmlab/linalg.hpp"
#include "rbmlab/spectral.hpp"

namespace rbmlab {

using cd = std::complex<double>;

cd dual_integrand(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double E, double eps,
                  const Eigen::MatrixXd& j_dense) {
    const int n = int(a.size());
    if (b.size() != n || j_dense.rows() != n || j_dense.cols() != n)
        throw std::invalid_argument("dual_integrand: size mismatch");
    if (eps <= 0.0) throw std::invalid_argument("dual_integrand: eps must be > 0");
    cd z(E, eps);
    cd log_ratio{0.0, 0.0};
    Eigen::VectorXcd f(n);
    for (int j = 0; j < n; ++j) {
        cd da = z - a[j];
        cd db = z - cd(0.0, b[j]);
        log_ratio += std::log(db) - std::log(da);
        f[j] = 1.0 / (da * db);
    }
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n, n);
    M.noalias() -= f.asDiagonal() * j_dense.cast<cd>();
    cd log_det = linalg::log_det(M);
    return std::exp(log_ratio + log_det);
}

namespace {

cd observable_value(DualObservable obs, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    switch (obs) {
        case DualObservable::One: return 1.0;
        case DualObservable::A0: return a[0];
        case DualObservable::SumStr1:
        case DualObservable::SumStr2: {
            cd s{0.0, 0.0};
            for (int j = 0; j < a.size(); ++j) s += cd(a[j], -b[j]);
            return obs == DualObservable::SumStr1 ? a[0] * s : a[0] * s * s;
        }
    }
    return 0.0;
}

template <class Sampler, class Make>
MCEstimate dual_mc(Make&& make_sampler, const Eigen::MatrixXd& j_dense, double E, double eps,
                   DualObservable obs, long n_samples, std::uint64_t seed, int n_workers) {
    std::vector<std::unique_ptr<Sampler>> samplers;
    for (int w = 0; w < n_workers; ++w) samplers.push_back(make_sampler());
    BatchAccumulator zero(std::max<long>(n_samples, 1));
    auto acc = parallel_mc(n_samples, n_workers, seed, zero,
                           [&](std::mt19937_64& rng, long idx, BatchAccumulator& acc_w, int w) {
                               Eigen::VectorXd a, b;
                               samplers[size_t(w)]->draw(rng, a);
                               samplers[size_t(w)]->draw(rng, b);
                               cd v = dual_integrand(a, b, E, eps, j_dense) *
                                      observable_value(obs, a, b);
                               acc_w.add(idx, v);
                           });
    return acc.estimate();
}

}  // namespace

MCEstimate dual_expectation(const TorusLattice& lat, double E, double eps, DualObservable obs,
                            long n_samples, std::uint64_t seed, int n_workers) {
    CovOperator jcov = covariance(CovKind::J, lat);
    Eigen::MatrixXd j_dense = build_dense(jcov).real();
    Eigen::ArrayXd mult = jcov.multipliers.real();
    int L = lat.side();
    return dual_mc<SpectralFieldSampler>(
        [&] { return std::make_unique<SpectralFieldSampler>(L, mult); }, j_dense, E, eps, obs,
        n_samples, seed, n_workers);
}

MCEstimate dual_expectation_dense(const Eigen::MatrixXd& j_dense, double E, double eps,
                                  DualObservable obs, long n_samples, std::uint64_t seed,
                                  int n_workers) {
    return dual_mc<DenseFieldSampler>([&] { return std::make_unique<DenseFieldSampler>(j_dense); },
                                      j_dense, E, eps, obs, n_samples, seed, n_workers);
}

MCEstimate dual_derivative(const TorusLattice& lat, double E, double eps, int n, long n_samples,
                           std::uint64_t seed, int n_workers) {
    if (n != 1 && n != 2) throw std::invalid_argument("dual_derivative: n must be 1 or 2");
    DualObservable obs = n == 1 ? DualObservable::SumStr1 : DualObservable::SumStr2;
    MCEstimate est = dual_expectation(lat, E, eps, obs, n_samples, seed, n_workers);
    if (n == 1) est.mean = 1.0 - est.mean;
    return est;
}

namespace {

cd quad_1d(const std::function<cd(double)>& f) {
    using boost::math::quadrature::gauss_kronrod;
    auto re = gauss_kronrod<double, 61>::integrate([&](double x) { return f(x).real(); }, -14.0,
                                                   14.0, 10, 1e-12);
    auto im = gauss_kronrod<double, 61>::integrate([&](double x) { return f(x).imag(); }, -14.0,
                                                   14.0, 10, 1e-12);
    return {re, im};
}

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

}  // namespace

cd volume_one_direct_quadrature(double E, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("volume_one_direct_quadrature: eps must be > 0");
    cd z(E, eps);
    return quad_1d([&](double h) { return std_normal_pdf(h) / (z - h); });
}

cd volume_one_dual_quadrature(double E, double eps, DualObservable obs) {
    if (eps <= 0.0) throw std::invalid_argument("volume_one_dual_quadrature: eps must be > 0");
    Eigen::MatrixXd j = Eigen::MatrixXd::Identity(1, 1);
    Eigen::VectorXd av(1), bv(1);
    return quad_1d([&](double a) {
        av[0] = a;
        cd inner = quad_1d([&](double b) {
            bv[0] = b;
            return std_normal_pdf(b) * dual_integrand(av, bv, E, eps, j) *
                   observable_value(obs, av, bv);
        });
        return std_normal_pdf(a) * inner;
    });
}

MCEstimate direct_expectation(const TorusLattice& lat, double E, double eps, long n_samples,
                              std::uint64_t seed, int n_workers) {
    if (eps <= 0.0) throw std::invalid_argument("direct_expectation: eps must be > 0");
    CovOperator jcov = covariance(CovKind::J, lat);
    Eigen::VectorXd jprof = jcov.profile.real();
    BatchAccumulator zero(std::max<long>(n_samples, 1));
    auto acc = parallel_mc(n_samples, n_workers, seed, zero,
                           [&](std::mt19937_64& rng, long idx, BatchAccumulator& acc_w, int) {
                               Eigen::MatrixXcd H = sample_band_matrix(lat, jprof, rng);
                               Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
                                   H, Eigen::EigenvaluesOnly);
                               cd tr = resolvent_trace_from_eigs(es.eigenvalues(), E, eps);
                               acc_w.add(idx, tr);
                           });
    return acc.estimate();
}

MCEstimate direct_expectation_de(const TorusLattice& lat, double E, double eps, double h,
                                 long n_samples, std::uint64_t seed, int n_workers) {
    MCEstimate up = direct_expectation(lat, E + h, eps, n_samples, seed, n_workers);
    MCEstimate dn = direct_expectation(lat, E - h, eps, n_samples, seed + 1, n_workers);
    MCEstimate out;
    out.mean = (up.mean - dn.mean) / (2.0 * h);
    out.se_re = std::sqrt(up.se_re * up.se_re + dn.se_re * dn.se_re) / (2.0 * h);
    out.se_im = std::sqrt(up.se_im * up.se_im + dn.se_im * dn.se_im) / (2.0 * h);
    out.n_samples = up.n_samples + dn.n_samples;
    return out;
}

}  // namespace rbmlab

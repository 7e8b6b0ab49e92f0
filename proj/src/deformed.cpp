#include "rbmlab/deformed.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "rbmlab/linalg.hpp"
#include "rbmlab/potential.hpp"
#include "rbmlab/spectral.hpp"

namespace rbmlab {

using cd = std::complex<double>;

namespace {

void require_deformable(double E) {
    if (E == 0.0)
        throw std::domain_error(
            "deformed representation: E = 0 sits on the removable singularity of V(ib)");
    // saddle_data rejects |E| >= 2
}

// log det(1 + i sigma m_i^2 C) from the C multipliers; Re(1 + i t c) = 1 > 0,
// so the principal branch is the analytic continuation mode by mode.
cd log_det_factor(const CovOperator& ccov) {
    double t = ccov.sigma_e * ccov.mi2;
    cd acc{0.0, 0.0};
    for (Eigen::Index k = 0; k < ccov.multipliers.size(); ++k)
        acc += std::log(cd(1.0, t * ccov.multipliers[k].real()));
    return acc;
}

}  // namespace

DeformedEstimate deformed_expectation(const TorusLattice& lat, double E, DeformedObservable obs,
                                      long n_samples, std::uint64_t seed, int n_workers) {
    require_deformable(E);
    SaddleData sd = saddle_data(E);
    CovOperator ccov = covariance(CovKind::C, lat, E);
    CovOperator bcov = covariance(CovKind::B, lat, E);
    Eigen::MatrixXcd b_dense = build_dense(bcov);
    Eigen::ArrayXd c_mult = ccov.multipliers.real();
    cd det_factor = std::exp(log_det_factor(ccov));
    double half_mass = 0.5 * sd.sigma_e * sd.mi2;
    int L = lat.side();

    std::vector<std::unique_ptr<SpectralFieldSampler>> samplers;
    for (int w = 0; w < n_workers; ++w)
        samplers.push_back(std::make_unique<SpectralFieldSampler>(L, c_mult));

    BatchAccumulator zero(std::max<long>(n_samples, 1));
    auto acc = parallel_mc(n_samples, n_workers, seed, zero,
                           [&](std::mt19937_64& rng, long idx, BatchAccumulator& acc_w, int w) {
                               Eigen::VectorXd a, b;
                               samplers[size_t(w)]->draw(rng, a);
                               samplers[size_t(w)]->draw(rng, b);
                               cd v = det_factor *
                                      std::exp(cd(0.0, -half_mass * (a.squaredNorm() +
                                                                     b.squaredNorm())));
                               if (obs != DeformedObservable::GaussOne) {
                                   v *= remainder_r(a, b, sd, b_dense).value;
                                   if (obs == DeformedObservable::RA0) v *= a[0];
                               }
                               acc_w.add(idx, v);
                           });

    DeformedEstimate out;
    out.mc = acc.estimate();
    out.a_s_plus = sd.a_plus;
    out.det_factor = det_factor;
    out.ess_fraction = out.mc.n_samples > 0 ? out.mc.ess / double(out.mc.n_samples) : 0.0;
    out.mc.flagged = out.ess_fraction < 0.01;
    if (obs == DeformedObservable::RA0) out.mc.mean += sd.a_plus;
    return out;
}

MCEstimate subvolume_norm_check(const TorusLattice& lat, double E, const std::vector<int>& sites,
                                long n_samples, std::uint64_t seed, int n_workers) {
    require_deformable(E);
    if (sites.empty()) throw std::invalid_argument("subvolume_norm_check: empty site subset");
    SaddleData sd = saddle_data(E);
    CovOperator bcov = covariance(CovKind::B, lat, E);
    const int k = int(sites.size());
    Eigen::MatrixXcd b_sub(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) b_sub(i, j) = bcov.entry(sites[size_t(i)], sites[size_t(j)]);

    // K = B_Y^{-1}; Re K >= m_r^2 by the Schur bound, so C' = (Re K)^{-1} is a
    // valid sampling covariance. The reweighting factor det K / det Re K
    // enters at power one (two fields), so the log branch is immaterial.
    Eigen::MatrixXcd K = b_sub.partialPivLu().solve(Eigen::MatrixXcd::Identity(k, k));
    K = ((K + K.transpose()) / 2.0).eval();
    Eigen::MatrixXd re_k = K.real();
    Eigen::MatrixXd im_k = K.imag();
    Eigen::MatrixXd c_prime = re_k.llt().solve(Eigen::MatrixXd::Identity(k, k));
    cd det_ratio = std::exp(linalg::log_det(K) - linalg::log_det(re_k));

    std::vector<std::unique_ptr<DenseFieldSampler>> samplers;
    for (int w = 0; w < n_workers; ++w)
        samplers.push_back(std::make_unique<DenseFieldSampler>(c_prime));

    BatchAccumulator zero(std::max<long>(n_samples, 1));
    auto acc = parallel_mc(n_samples, n_workers, seed, zero,
                           [&](std::mt19937_64& rng, long idx, BatchAccumulator& acc_w, int w) {
                               Eigen::VectorXd a, b;
                               samplers[size_t(w)]->draw(rng, a);
                               samplers[size_t(w)]->draw(rng, b);
                               double q = a.dot(im_k * a) + b.dot(im_k * b);
                               cd v = det_ratio * std::exp(cd(0.0, -0.5 * q)) *
                                      remainder_r(a, b, sd, b_sub).value;
                               acc_w.add(idx, v);
                           });
    return acc.estimate();
}

// ------------------------------------------------------------------

RegionLabel classify_region(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double delta,
                            const SaddleData& sd) {
    if (!(delta > 0.0)) throw std::invalid_argument("classify_region: delta must be > 0");
    RegionLabel lab;
    lab.delta = delta;

    int ia = 0;
    double amax = a.cwiseAbs().maxCoeff(&ia);
    if (amax > delta) {
        lab.region = 3;
        lab.j0 = ia;
        return lab;
    }
    int ihi = 0, ilo = 0;
    double bhi = b.maxCoeff(&ihi);
    double blo = b.minCoeff(&ilo);
    if (bhi - blo > delta) {
        lab.region = 4;
        lab.j0 = ihi;
        lab.j0p = ilo;
        return lab;
    }
    double b0 = b[0];
    if (std::abs(b0) <= 2.0 * delta)
        lab.region = 1;
    else if (std::abs(b0 - 2.0 * sd.ei) <= 2.0 * delta)
        lab.region = 2;
    else
        lab.region = 5;
    return lab;
}

RegionReport region_report(const TorusLattice& lat, double E, double nu, long n_samples,
                           std::uint64_t seed, int n_workers) {
    require_deformable(E);
    if (!(nu > 0.0 && nu < 1.0))
        throw std::invalid_argument("region_report: nu must lie in (0,1)");
    SaddleData sd = saddle_data(E);
    CovOperator ccov = covariance(CovKind::C, lat, E);
    CovOperator bcov = covariance(CovKind::B, lat, E);
    cd b00 = bcov.profile[0];
    Eigen::ArrayXd c_mult = ccov.multipliers.real();
    double delta = std::pow(lat.band_width(), -nu);
    int L = lat.side();
    const int n = lat.volume();

    std::vector<std::unique_ptr<SpectralFieldSampler>> samplers;
    for (int w = 0; w < n_workers; ++w)
        samplers.push_back(std::make_unique<SpectralFieldSampler>(L, c_mult));

    // slots 0..4: chi_s * q, slots 5..9: chi_s, slot 10: q
    MultiBatchAccumulator zero(11, std::max<long>(n_samples, 1));
    auto acc = parallel_mc(
        n_samples, n_workers, seed, zero,
        [&](std::mt19937_64& rng, long idx, MultiBatchAccumulator& acc_w, int w) {
            Eigen::VectorXd a, b;
            samplers[size_t(w)]->draw(rng, a);
            samplers[size_t(w)]->draw(rng, b);
            int s = classify_region(a, b, delta, sd).region;
            cd sum_d{0.0, 0.0};
            for (int j = 0; j < n; ++j) sum_d += d_term(a[j], b[j], sd);
            double q = std::exp((b00 * sum_d).real() + script_v(a, b, sd).real());
            for (int r = 1; r <= 5; ++r) {
                acc_w.add(r - 1, idx, r == s ? q : 0.0);
                acc_w.add(r + 4, idx, r == s ? 1.0 : 0.0);
            }
            acc_w.add(10, idx, q);
        });

    RegionReport rep;
    rep.L = L;
    rep.W = lat.band_width();
    rep.E = E;
    rep.nu = nu;
    rep.delta = delta;
    MCEstimate total = acc.estimate(10);
    rep.n_samples = total.n_samples;
    rep.total = total.mean.real();
    rep.total_se = total.se_re;
    double csum = 0.0;
    for (int r = 0; r < 5; ++r) {
        MCEstimate contrib = acc.estimate(r);
        MCEstimate prob = acc.estimate(r + 5);
        RegionStat& st = rep.regions[size_t(r)];
        st.contribution = contrib.mean.real();
        st.contrib_se = contrib.se_re;
        st.probability = prob.mean.real();
        st.prob_se = prob.se_re;
        st.count = std::lround(st.probability * double(prob.n_samples));
        csum += st.contribution;
    }
    rep.partition_defect = std::abs(csum - rep.total);
    return rep;
}

std::vector<double> richardson_weights(const std::vector<double>& eps) {
    const int n = int(eps.size());
    if (n == 0) throw std::invalid_argument("richardson_weights: empty node list");
    std::vector<double> w(size_t(n), 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (eps[size_t(i)] == eps[size_t(j)])
                throw std::invalid_argument("richardson_weights: repeated node");
            w[size_t(i)] *= eps[size_t(j)] / (eps[size_t(j)] - eps[size_t(i)]);
        }
    return w;
}

}  // namespace rbmlab

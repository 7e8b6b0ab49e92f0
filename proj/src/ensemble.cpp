#include "rbmlab/ensemble.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "rbmlab/linalg.hpp"

namespace rbmlab {

using cd = std::complex<double>;

Eigen::MatrixXcd sample_band_matrix(const TorusLattice& lat, const Eigen::VectorXd& j_profile,
                                    std::mt19937_64& rng) {
    const int n = lat.volume();
    if (int(j_profile.size()) != n)
        throw std::invalid_argument("sample_band_matrix: profile size mismatch");
    Eigen::MatrixXcd H(n, n);
    std::normal_distribution<double> nd;
    for (int i = 0; i < n; ++i) {
        H(i, i) = std::sqrt(j_profile[0]) * nd(rng);
        auto ci = lat.coords(i);
        for (int j = i + 1; j < n; ++j) {
            auto cj = lat.coords(j);
            double var = j_profile[lat.index(ci[0] - cj[0], ci[1] - cj[1])];
            double sd = std::sqrt(0.5 * var);
            cd v(sd * nd(rng), sd * nd(rng));
            H(i, j) = v;
            H(j, i) = std::conj(v);
        }
    }
    return H;
}

cd resolvent_trace_from_eigs(const Eigen::VectorXd& eigs, double E, double eps) {
    cd z(E, eps);
    cd sum{0.0, 0.0};
    for (int k = 0; k < eigs.size(); ++k) sum += 1.0 / (z - eigs[k]);
    return sum / double(eigs.size());
}

double broadened_dos_from_eigs(const Eigen::VectorXd& eigs, double E, double eps) {
    double sum = 0.0;
    for (int k = 0; k < eigs.size(); ++k) {
        double d = E - eigs[k];
        sum += eps / (d * d + eps * eps);
    }
    return sum / (M_PI * eigs.size());
}

StochasticTrace stochastic_resolvent_trace(const Eigen::MatrixXcd& H, double E, double eps,
                                           int n_probes, std::mt19937_64& rng) {
    const int n = int(H.rows());
    if (n_probes < 2) throw std::invalid_argument("stochastic_resolvent_trace: need >= 2 probes");
    Eigen::MatrixXcd A = -H;
    A.diagonal().array() += cd(E, eps);
    linalg::LuFactor lu(std::move(A));
    Eigen::MatrixXcd Z(n, n_probes);
    std::bernoulli_distribution coin(0.5);
    for (int p = 0; p < n_probes; ++p)
        for (int i = 0; i < n; ++i) Z(i, p) = coin(rng) ? 1.0 : -1.0;
    Eigen::MatrixXcd X = lu.solve(Z);
    StochasticTrace out;
    cd mean{0.0, 0.0};
    std::vector<cd> vals(static_cast<size_t>(n_probes));
    for (int p = 0; p < n_probes; ++p) {
        cd v = Z.col(p).dot(X.col(p)) / double(n);   // probes are real, so dot = plain sum
        vals[size_t(p)] = v;
        mean += v;
    }
    mean /= double(n_probes);
    double vr = 0.0, vi = 0.0;
    for (auto v : vals) {
        vr += (v.real() - mean.real()) * (v.real() - mean.real());
        vi += (v.imag() - mean.imag()) * (v.imag() - mean.imag());
    }
    out.mean = mean;
    out.se_re = std::sqrt(vr / (n_probes - 1) / n_probes);
    out.se_im = std::sqrt(vi / (n_probes - 1) / n_probes);
    return out;
}

std::vector<SpectralEstimate> averaged_dos(const EnsembleConfig& cfg,
                                           const std::vector<double>& energies, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("averaged_dos: eps must be > 0");
    if (energies.empty()) throw std::invalid_argument("averaged_dos: empty energy grid");
    TorusLattice lat(cfg.L, cfg.W);
    CovOperator jcov = covariance(CovKind::J, lat);
    Eigen::VectorXd jprof = jcov.profile.real();
    const int ne = int(energies.size());

    MultiBatchAccumulator zero(ne, std::max<long>(cfg.n_samples, 1));
    auto acc = parallel_mc(cfg.n_samples, cfg.n_workers, cfg.seed, zero,
                           [&](std::mt19937_64& rng, long idx, MultiBatchAccumulator& a, int) {
                               Eigen::MatrixXcd H = sample_band_matrix(lat, jprof, rng);
                               if (cfg.trace == TraceMethod::ExactEigen) {
                                   Eigen::VectorXd eigs =
                                       linalg::hermitian_eigenvalues(std::move(H));
                                   for (int e = 0; e < ne; ++e) {
                                       cd tr = resolvent_trace_from_eigs(eigs, energies[size_t(e)], eps);
                                       if (!(tr.imag() < 0.0))
                                           throw std::runtime_error("averaged_dos: resolvent trace lost negativity");
                                       a.add(e, idx, tr);
                                   }
                               } else {
                                   for (int e = 0; e < ne; ++e) {
                                       auto st = stochastic_resolvent_trace(H, energies[size_t(e)],
                                                                            eps, cfg.n_probes, rng);
                                       a.add(e, idx, st.mean);
                                   }
                               }
                           });

    std::vector<SpectralEstimate> out(static_cast<size_t>(ne));
    for (int e = 0; e < ne; ++e) {
        MCEstimate m = acc.estimate(e);
        SpectralEstimate& s = out[size_t(e)];
        s.E = energies[size_t(e)];
        s.eps = eps;
        s.L = cfg.L;
        s.W = cfg.W;
        s.trace_mean = m.mean;
        s.se_re = m.se_re;
        s.se_im = m.se_im;
        s.rho = -m.mean.imag() / M_PI;
        s.rho_se = m.se_im / M_PI;
        s.rho_sc = semicircle_density(s.E);
        s.rho_sc_eps = broadened_semicircle_density(s.E, eps);
        s.abs_err = std::abs(s.rho - s.rho_sc_eps);
        s.n_samples = m.n_samples;
    }
    return out;
}

DosScanResult dos_error_scan(const std::vector<EnsembleConfig>& configs,
                             const std::vector<double>& energies, double eps) {
    DosScanResult res;
    for (const auto& cfg : configs) {
        auto ests = averaged_dos(cfg, energies, eps);
        for (auto& est : ests) res.rows.push_back({cfg.W, cfg.L, est});
    }
    // fitted slope of ln(err) vs ln(W) per energy
    for (double E : energies) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (auto& row : res.rows) {
            if (row.est.E != E || row.est.abs_err <= 0.0) continue;
            double x = std::log(double(row.W));
            double y = std::log(row.est.abs_err);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++m;
        }
        double slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
        res.err_slopes.emplace_back(E, slope);
    }
    return res;
}

}  // namespace rbmlab

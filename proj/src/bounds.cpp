#include "rbmlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <random>
#include <stdexcept>

#include "rbmlab/linalg.hpp"
#include "rbmlab/potential.hpp"
#include "rbmlab/rng.hpp"
#include "rbmlab/saddle.hpp"
#include "rbmlab/spectral.hpp"

namespace rbmlab {

using cd = std::complex<double>;

namespace {

// checks log|det(1+A)| <= Re Tr A + Tr A*A / 2 and tracks the worst slack
void check_one_det_bound(const Eigen::MatrixXcd& A, DetBoundReport& rep) {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(A.rows(), A.cols()) + A;
    double lhs = linalg::log_det(M).real();
    double rhs = A.trace().real() + 0.5 * A.squaredNorm();
    double slack = lhs - rhs;
    ++rep.trials;
    rep.max_log_slack = std::max(rep.max_log_slack, slack);
    if (slack > 1e-9) ++rep.violations;
}

}  // namespace

DetBoundReport det_bound_check(int trials, int n_max, std::uint64_t seed) {
    if (n_max < 1) throw std::invalid_argument("det_bound_check: n_max must be >= 1");
    auto rng = make_stream(seed, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    DetBoundReport rep;
    rep.max_log_slack = -1e300;
    for (int t = 0; t < trials; ++t) {
        int n = 1 + t % n_max;
        Eigen::MatrixXcd A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = cd(normal(rng), normal(rng));
        check_one_det_bound(A, rep);
    }
    return rep;
}

DetBoundReport det_bound_check_fields(const TorusLattice& lat, double E, int trials,
                                      std::uint64_t seed) {
    SaddleData sd = saddle_data(E);
    CovOperator bcov = covariance(CovKind::B, lat, E);
    Eigen::MatrixXcd b_dense = build_dense(bcov);
    const int n = lat.volume();
    auto rng = make_stream(seed, 0);
    std::normal_distribution<double> normal(0.0, 1.5);
    DetBoundReport rep;
    rep.max_log_slack = -1e300;
    Eigen::VectorXd a(n), b(n);
    for (int t = 0; t < trials; ++t) {
        for (int j = 0; j < n; ++j) {
            a[j] = normal(rng);
            b[j] = normal(rng);
        }
        Eigen::MatrixXcd A = b_dense;
        for (int j = 0; j < n; ++j) A.row(j) *= d_term(a[j], b[j], sd);
        check_one_det_bound(A, rep);
    }
    return rep;
}

double measure_log_abs_det(int L, int W, double E) {
    SaddleData sd = saddle_data(E);
    Eigen::ArrayXd lam = laplacian_mode_eigenvalues(L);
    double w2 = double(W) * double(W);
    double mi4 = sd.mi2 * sd.mi2;
    double acc = 0.0;
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
        double c = 1.0 / (w2 * lam[k] + sd.mr2);
        acc += 0.5 * std::log1p(mi4 * c * c);
    }
    return acc;
}

MeasureBoundReport measure_bound_scan(int trials, double margin, std::uint64_t seed) {
    MeasureBoundReport rep;
    rep.margin = margin;

    // fit grid: every W in 1..16, aspect L/W in 1..4, |E| on a 0.2 mesh
    for (int W = 1; W <= 16; ++W)
        for (int r = 1; r <= 4; ++r) {
            int L = std::max(2, r * W);
            for (int ie = 1; ie <= 9; ++ie)
                for (int sgn : {-1, 1}) {
                    double E = sgn * 0.2 * ie;
                    double k = measure_log_abs_det(L, W, E) * W * W / double(L * L);
                    rep.fitted_K = std::max(rep.fitted_K, k);
                }
        }

    // random instances from the same ranges
    auto rng = make_stream(seed, 0);
    std::uniform_int_distribution<int> w_dist(1, 16), r_dist(1, 4), sign_dist(0, 1);
    std::uniform_real_distribution<double> e_dist(0.2, 1.8);
    for (int t = 0; t < trials; ++t) {
        int W = w_dist(rng);
        int L = std::max(2, r_dist(rng) * W);
        double E = (sign_dist(rng) ? 1.0 : -1.0) * e_dist(rng);
        double val = measure_log_abs_det(L, W, E);
        double cap = margin * rep.fitted_K * double(L * L) / double(W * W);
        ++rep.trials;
        rep.max_ratio = std::max(rep.max_ratio, val * W * W / double(L * L));
        if (val > cap + 1e-12) ++rep.violations;
    }

    // linearity of log|det| in |Lambda| at fixed (W, E)
    {
        const int W = 4;
        const double E = 1.0;
        std::vector<double> xs, ys;
        for (int L : {8, 16, 24, 32, 48, 64}) {
            xs.push_back(double(L * L));
            ys.push_back(measure_log_abs_det(L, W, E));
        }
        double n = double(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
            syy += ys[i] * ys[i];
        }
        double cov = sxy - sx * sy / n;
        double vx = sxx - sx * sx / n;
        double vy = syy - sy * sy / n;
        rep.linear_r2 = vx > 0 && vy > 0 ? cov * cov / (vx * vy) : 0.0;
    }
    return rep;
}

// ------------------------------------------------------------------

namespace {

// global ratio with batch-means SE over per-batch ratios
void ratio_estimate(const BatchAccumulator& num, const BatchAccumulator& den, double& est,
                    double& se) {
    double ns = 0.0, ds = 0.0;
    std::vector<double> ratios;
    for (int b = 0; b < num.batches(); ++b) {
        if (den.batch_count(b) == 0) continue;
        double nb = num.batch_sum(b).real();
        double db = den.batch_sum(b).real();
        ns += nb;
        ds += db;
        if (db > 0.0) ratios.push_back(nb / db);
    }
    est = ds != 0.0 ? ns / ds : 0.0;
    se = 0.0;
    if (ratios.size() > 1) {
        double m = 0.0;
        for (double r : ratios) m += r;
        m /= double(ratios.size());
        double v = 0.0;
        for (double r : ratios) v += (r - m) * (r - m);
        se = std::sqrt(v / double(ratios.size() - 1) / double(ratios.size()));
    }
}

}  // namespace

std::vector<BrascampLiebRow> brascamp_lieb_check(const TorusLattice& lat, double E,
                                                 const std::vector<double>& lambdas,
                                                 long n_samples, std::uint64_t seed,
                                                 int n_workers) {
    CovOperator ccov = covariance(CovKind::C, lat, E);
    Eigen::ArrayXd c_mult = ccov.multipliers.real();
    const int n = lat.volume();
    const int L = lat.side();
    double c00 = ccov.profile[0].real();

    // fixed small tilt vector for the exponential test
    auto vrng = make_stream(seed, 0x7e57);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (int j = 0; j < n; ++j) v[j] = 0.3 * normal(vrng) / std::sqrt(double(n));
    double vcv = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) vcv += v[i] * ccov.real_entry(i, j) * v[j];

    std::vector<BrascampLiebRow> rows;
    for (size_t il = 0; il < lambdas.size(); ++il) {
        double lambda = lambdas[il];
        if (lambda < 0.0) throw std::invalid_argument("brascamp_lieb_check: lambda must be >= 0");

        std::vector<std::unique_ptr<SpectralFieldSampler>> samplers;
        for (int w = 0; w < n_workers; ++w)
            samplers.push_back(std::make_unique<SpectralFieldSampler>(L, c_mult));

        // slots: 0 weight u, 1 u x0^2, 2 u x0^4, 3 u e^{(v,x)}
        MultiBatchAccumulator zero(4, std::max<long>(n_samples, 1));
        auto acc = parallel_mc(n_samples, n_workers, seed + il, zero,
                               [&](std::mt19937_64& rng, long idx, MultiBatchAccumulator& acc_w,
                                   int w) {
                                   Eigen::VectorXd x;
                                   samplers[size_t(w)]->draw(rng, x);
                                   double quart = x.array().square().square().sum();
                                   double u = std::exp(-0.5 * lambda * quart);
                                   double x0 = x[0];
                                   acc_w.add(0, idx, u);
                                   acc_w.add(1, idx, u * x0 * x0);
                                   acc_w.add(2, idx, u * x0 * x0 * x0 * x0);
                                   acc_w.add(3, idx, u * std::exp(v.dot(x)));
                               });

        BrascampLiebRow row;
        row.lambda = lambda;
        row.m2_gauss = c00;
        row.m4_gauss = 3.0 * c00 * c00;
        row.exp_gauss = std::exp(0.5 * vcv);
        ratio_estimate(acc.slot(1), acc.slot(0), row.m2_est, row.m2_se);
        ratio_estimate(acc.slot(2), acc.slot(0), row.m4_est, row.m4_se);
        ratio_estimate(acc.slot(3), acc.slot(0), row.exp_est, row.exp_se);
        row.violations = 0;
        if (row.m2_est - row.m2_gauss > 3.0 * row.m2_se) ++row.violations;
        if (row.m4_est - row.m4_gauss > 3.0 * row.m4_se) ++row.violations;
        if (row.exp_est - row.exp_gauss > 3.0 * row.exp_se) ++row.violations;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace rbmlab

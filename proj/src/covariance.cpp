#include "rbmlab/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rbmlab/spectral.hpp"

namespace rbmlab {

using cd = std::complex<double>;

std::string cov_kind_name(CovKind k) {
    switch (k) {
        case CovKind::J: return "J";
        case CovKind::C: return "C";
        case CovKind::B: return "B";
        case CovKind::Cf: return "Cf";
        case CovKind::NeumannC: return "NeumannC";
    }
    return "?";
}

Eigen::ArrayXd laplacian_mode_eigenvalues(int L) {
    Eigen::ArrayXd lam(L * L);
    // folding n -> min(n, L - n) makes the k <-> -k symmetry exact in floats
    auto one_d = [L](int n) {
        int m = std::min(n, L - n);
        return 2.0 * (1.0 - std::cos(2.0 * M_PI * m / L));
    };
    for (int ny = 0; ny < L; ++ny)
        for (int nx = 0; nx < L; ++nx) lam[nx + L * ny] = one_d(nx) + one_d(ny);
    return lam;
}

Eigen::MatrixXd laplacian_dense(const TorusLattice& lat) {
    const int n = lat.volume();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    // one directed edge per site and positive direction; L = 2 yields doubled
    // edges and L = 1 only self-loops, which drop out of the quadratic form
    for (int i = 0; i < n; ++i)
        for (int dir : {0, 2}) {
            int j = lat.neighbor(i, dir);
            if (j == i) continue;
            M(i, i) += 1.0;
            M(j, j) += 1.0;
            M(i, j) -= 1.0;
            M(j, i) -= 1.0;
        }
    return M;
}

Eigen::MatrixXd laplacian_neumann_dense(const TorusLattice& lat, const BlockPartition& part) {
    const int n = lat.volume();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int dir : {0, 2}) {
            int j = lat.neighbor(i, dir);
            if (j == i) continue;
            if (part.block_of(i) != part.block_of(j)) continue;
            M(i, i) += 1.0;
            M(j, j) += 1.0;
            M(i, j) -= 1.0;
            M(j, i) -= 1.0;
        }
    return M;
}

namespace {

void fill_saddle_fields(CovOperator& cov, double E) {
    SaddleData s = saddle_data(E);
    cov.E = E;
    cov.mr2 = s.mr2;
    cov.mi2 = s.mi2;
    cov.sigma_e = s.sigma_e;
}

void fill_spectral(CovOperator& cov) {
    const int L = cov.lat.side();
    const int n = cov.lat.volume();
    const double w2 = double(cov.lat.band_width()) * cov.lat.band_width();
    Eigen::ArrayXd lam = laplacian_mode_eigenvalues(L);
    cov.multipliers.resize(n);
    for (int k = 0; k < n; ++k) {
        cd denom;
        switch (cov.kind) {
            case CovKind::J: denom = w2 * lam[k] + 1.0; break;
            case CovKind::C: denom = w2 * lam[k] + cov.mr2; break;
            case CovKind::Cf: denom = w2 * lam[k] + cov.mr2 * (1.0 - cov.f); break;
            case CovKind::B: denom = cd(w2 * lam[k] + cov.mr2, cov.sigma_e * cov.mi2); break;
            default: throw std::logic_error("fill_spectral: dense kind");
        }
        cov.multipliers[k] = 1.0 / denom;
    }
    // real-space row of site 0 by inverse transform
    Fft2D fft(L);
    cov.profile.resize(n);
    std::vector<cd> in(static_cast<size_t>(n)), out(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) in[size_t(k)] = cov.multipliers[k];
    fft.backward(in.data(), out.data());
    for (int k = 0; k < n; ++k) cov.profile[k] = out[size_t(k)] / double(n);
}

}  // namespace

cd CovOperator::entry(int i, int j) const {
    if (translation_invariant()) {
        auto a = lat.coords(i);
        auto b = lat.coords(j);
        return profile[lat.index(a[0] - b[0], a[1] - b[1])];
    }
    return dense(i, j);
}

cd CovOperator::row_sum() const {
    if (!translation_invariant())
        throw std::logic_error("row_sum: spectral kinds only");
    return multipliers[0];
}

CovOperator covariance(CovKind kind, const TorusLattice& lat, double E, double f) {
    CovOperator cov;
    cov.kind = kind;
    cov.lat = lat;
    cov.f = f;
    switch (kind) {
        case CovKind::J:
            break;
        case CovKind::C:
        case CovKind::B:
            fill_saddle_fields(cov, E);
            break;
        case CovKind::Cf:
            if (!(f >= 0.0 && f < 1.0))
                throw std::invalid_argument("covariance: Cf needs 0 <= f < 1");
            fill_saddle_fields(cov, E);
            break;
        case CovKind::NeumannC:
            throw std::invalid_argument("covariance: NeumannC needs a partition, use covariance_neumann");
    }
    fill_spectral(cov);
    return cov;
}

CovOperator covariance_neumann(const TorusLattice& lat, const BlockPartition& part, double E) {
    CovOperator cov;
    cov.kind = CovKind::NeumannC;
    cov.lat = lat;
    fill_saddle_fields(cov, E);
    const double w2 = double(lat.band_width()) * lat.band_width();
    Eigen::MatrixXd A = w2 * laplacian_neumann_dense(lat, part);
    A.diagonal().array() += cov.mr2;
    Eigen::MatrixXd Cn = A.llt().solve(Eigen::MatrixXd::Identity(lat.volume(), lat.volume()));
    cov.dense = Cn.cast<cd>();
    return cov;
}

Eigen::MatrixXcd build_dense(const CovOperator& cov) {
    if (!cov.translation_invariant()) return cov.dense;
    const int n = cov.lat.volume();
    Eigen::MatrixXcd M(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) M(i, j) = cov.entry(i, j);
    return M;
}

// ------------------------------------------------------------------

DecayReport check_decay_bound(const CovOperator& cov) {
    if (cov.kind != CovKind::C && cov.kind != CovKind::B)
        throw std::invalid_argument("check_decay_bound: kinds C and B only");
    const int L = cov.lat.side();
    const int W = cov.lat.band_width();
    const int n = cov.lat.volume();
    const double mr = std::sqrt(cov.mr2);

    DecayReport rep;
    rep.kind = cov_kind_name(cov.kind);
    rep.L = L;
    rep.W = W;
    rep.E = cov.E;
    rep.bound_rate = mr / W;
    rep.precondition_ok = mr * L > 1.0;

    // distance-binned maxima of |entry| over the row of site 0
    const double r_near = W / mr;
    const double r_max = 0.4 * L;
    std::vector<double> bin_max(size_t(L) + 2, 0.0);
    double min_entry = cov.profile[0].real();
    for (int j = 0; j < n; ++j) {
        double v = std::abs(cov.profile[j]);
        min_entry = std::min(min_entry, cov.profile[j].real());
        if (j == 0) continue;
        double r = cov.lat.distance(0, j);
        int bin = int(std::lround(r));
        if (bin < int(bin_max.size())) bin_max[size_t(bin)] = std::max(bin_max[size_t(bin)], v);
    }
    rep.min_entry = min_entry;

    // short-distance regime: entry <= (K/W^2) ln(W / (m_r (1+r)))
    double k_near = 0.0;
    for (int j = 1; j < n; ++j) {
        double r = cov.lat.distance(0, j);
        if (r > r_near) continue;
        double lg = std::log(W / (mr * (1.0 + r)));
        if (lg < 0.05) continue;
        k_near = std::max(k_near, std::abs(cov.profile[j]) * W * W / lg);
    }
    rep.fitted_K_near = k_near;

    // tail regime: least-squares fit ln(v sqrt(r) W^{3/2}) = ln K - rate r
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int npts = 0;
    for (int bin = 1; bin < int(bin_max.size()); ++bin) {
        double r = double(bin);
        if (r <= r_near || r > r_max) continue;
        if (bin_max[size_t(bin)] <= 0.0) continue;
        double y = std::log(bin_max[size_t(bin)] * std::sqrt(r) * std::pow(double(W), 1.5));
        rep.tail_profile.push_back({r, bin_max[size_t(bin)]});
        sx += r; sy += y; sxx += r * r; sxy += r * y;
        ++npts;
    }
    if (npts >= 2) {
        double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
        double icpt = (sy - slope * sx) / npts;
        rep.fitted_rate = -slope;
        // envelope prefactor at the fitted rate
        double k_tail = 0.0;
        for (auto& p : rep.tail_profile)
            k_tail = std::max(k_tail, p[1] * std::sqrt(p[0]) * std::pow(double(W), 1.5) *
                                           std::exp(rep.fitted_rate * p[0]));
        rep.fitted_K_tail = std::max(k_tail, std::exp(icpt));
    }

    // violations vs the fitted envelopes
    int violations = 0;
    for (int j = 1; j < n; ++j) {
        double r = cov.lat.distance(0, j);
        double v = std::abs(cov.profile[j]);
        if (r <= r_near) {
            double lg = std::log(W / (mr * (1.0 + r)));
            if (lg >= 0.05 && v > rep.fitted_K_near * lg / (W * W) * (1.0 + 1e-9) + 1e-300)
                ++violations;
        } else if (r <= r_max && rep.fitted_rate > 0.0) {
            double env = rep.fitted_K_tail * std::exp(-rep.fitted_rate * r) /
                         (std::sqrt(r) * std::pow(double(W), 1.5));
            if (v > env * (1.0 + 1e-9) + 1e-300) ++violations;
        }
    }
    rep.violations = violations;

    // diagonal growth fit over a small W scan at the same (L, E)
    {
        std::vector<int> ws;
        if (W / 2 >= 1 && W / 2 != W) ws = {W / 2, W, 2 * W};
        else ws = {W, 2 * W, 4 * W};
        double ax = 0, ay = 0, axx = 0, axy = 0;
        for (int w : ws) {
            CovOperator c = covariance(CovKind::C, TorusLattice(L, w), cov.E);
            // unit-hopping normalization: W^2 C = (-Delta + (m_r/W)^2)^{-1}
            double x = std::log(w / mr);
            double y = double(w) * double(w) * c.profile[0].real();
            ax += x; ay += y; axx += x * x; axy += x * y;
        }
        int m = int(ws.size());
        double k1 = (m * axy - ax * ay) / (m * axx - ax * ax);
        double k2 = (ay - k1 * ax) / m;
        rep.diag_lower_fit = {k1, k2};
    }

    // kind B: entrywise comparison against C
    if (cov.kind == CovKind::B) {
        CovOperator c = covariance(CovKind::C, cov.lat, cov.E);
        int bad = 0;
        for (int j = 0; j < n; ++j)
            if (std::abs(cov.profile[j]) > c.profile[j].real() + 1e-12) ++bad;
        rep.b_le_c_violations = bad;
    }

    bool positivity_ok = cov.kind == CovKind::B || rep.min_entry > 0.0;
    bool b_le_c_ok = cov.kind != CovKind::B || rep.b_le_c_violations == 0;
    rep.pass = rep.precondition_ok && positivity_ok && b_le_c_ok && rep.violations == 0 &&
               rep.fitted_rate >= 0.9 * rep.bound_rate && rep.diag_lower_fit[0] > 0.0 &&
               rep.diag_lower_fit[1] > 0.0;
    return rep;
}

SchurMassResult schur_mass_check(const CovOperator& bcov, const std::vector<int>& Y, double tol) {
    if (Y.empty()) throw std::invalid_argument("schur_mass_check: empty subset");
    const int n = bcov.lat.volume();
    for (int y : Y)
        if (y < 0 || y >= n) throw std::invalid_argument("schur_mass_check: site out of range");
    const int m = int(Y.size());
    Eigen::MatrixXcd By(m, m);
    for (int c = 0; c < m; ++c)
        for (int r = 0; r < m; ++r) By(r, c) = bcov.entry(Y[size_t(r)], Y[size_t(c)]);
    Eigen::MatrixXcd K = By.partialPivLu().solve(Eigen::MatrixXcd::Identity(m, m));
    Eigen::MatrixXd reK = K.real();
    reK = 0.5 * (reK + reK.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reK, Eigen::EigenvaluesOnly);
    SchurMassResult out;
    out.lambda_min = es.eigenvalues().minCoeff();
    out.bound = bcov.mr2;
    out.subset_size = m;
    out.pass = out.lambda_min >= out.bound - tol;
    return out;
}

}  // namespace rbmlab

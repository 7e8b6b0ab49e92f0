#include "rbmlab/interpolation.hpp"

#include <stdexcept>

namespace rbmlab {

using cd = std::complex<double>;

ExtractionOrder extraction_order_from_partition(const BlockPartition& part,
                                                const std::vector<int>& block_order) {
    ExtractionOrder order;
    std::vector<bool> seen(size_t(part.n_blocks()), false);
    for (int b : block_order) {
        if (b < 0 || b >= part.n_blocks() || seen[size_t(b)])
            throw std::invalid_argument("extraction_order_from_partition: bad block order");
        seen[size_t(b)] = true;
        order.groups.push_back(part.sites_of(b));
    }
    if (int(order.groups.size()) != part.n_blocks())
        throw std::invalid_argument("extraction_order_from_partition: order must cover all blocks");
    return order;
}

InterpolatedCov::InterpolatedCov(const CovOperator& c, ExtractionOrder order,
                                 const Eigen::VectorXd& s)
    : base_(c), order_(std::move(order)), s_(s) {
    if (c.kind != CovKind::C)
        throw std::invalid_argument("InterpolatedCov: base covariance must be kind C");
    const int n = c.lat.volume();
    group_of_.assign(size_t(n), -1);
    for (size_t g = 0; g < order_.groups.size(); ++g)
        for (int site : order_.groups[g]) {
            if (site < 0 || site >= n || group_of_[size_t(site)] != -1)
                throw std::invalid_argument("InterpolatedCov: groups must be disjoint and in range");
            group_of_[size_t(site)] = int(g);
        }
    for (int site = 0; site < n; ++site)
        if (group_of_[size_t(site)] == -1)
            throw std::invalid_argument("InterpolatedCov: groups must cover the lattice");
    if (s_.size() != int(order_.groups.size()) - 1)
        throw std::invalid_argument("InterpolatedCov: need one parameter per coupling step");
    for (int q = 0; q < s_.size(); ++q)
        if (!(s_[q] >= 0.0 && s_[q] <= 1.0))
            throw std::invalid_argument("InterpolatedCov: s must lie in [0,1]");
    cs_ = build_cs(n_params());
}

double InterpolatedCov::pair_multiplier(int gi, int gj, int upto) const {
    int a = std::min(gi, gj);
    int b = std::max(gi, gj);
    double m = 1.0;
    // parameter s_q has index q-1; steps beyond `upto` are frozen at 1
    for (int q = a + 1; q <= b && q <= upto; ++q) m *= s_[q - 1];
    return m;
}

Eigen::MatrixXd InterpolatedCov::build_cs(int upto) const {
    const int n = base_.lat.volume();
    Eigen::MatrixXd M(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double mult = (i == j) ? 1.0
                                   : pair_multiplier(group_of_[size_t(i)], group_of_[size_t(j)], upto);
            M(i, j) = base_.real_entry(i, j) * mult;
        }
    return M;
}

Eigen::MatrixXcd InterpolatedCov::bs() const {
    const int n = int(cs_.rows());
    Eigen::MatrixXcd csx = cs_.cast<cd>();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n) + cd(0.0, base_.sigma_e * base_.mi2) * csx;
    return csx * A.partialPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
}

Eigen::MatrixXcd InterpolatedCov::g(int q) const {
    if (q < 0 || q > n_params()) throw std::invalid_argument("InterpolatedCov::g: bad step index");
    const int n = int(cs_.rows());
    Eigen::MatrixXd csq = build_cs(q);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n) +
                         cd(0.0, base_.sigma_e * base_.mi2) * csq.cast<cd>();
    return A.partialPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
}

Eigen::MatrixXd InterpolatedCov::dcs(int q) const {
    if (q < 1 || q > n_params()) throw std::invalid_argument("InterpolatedCov::dcs: bad step index");
    const int n = int(cs_.rows());
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            int a = std::min(group_of_[size_t(i)], group_of_[size_t(j)]);
            int b = std::max(group_of_[size_t(i)], group_of_[size_t(j)]);
            if (q < a + 1 || q > b) continue;
            double m = 1.0;
            for (int p = a + 1; p <= b; ++p)
                if (p != q) m *= s_[p - 1];
            M(i, j) = base_.real_entry(i, j) * m;
        }
    return M;
}

Eigen::MatrixXcd InterpolatedCov::dbs(int q) const {
    Eigen::MatrixXcd G = g(n_params());
    return G * dcs(q).cast<cd>() * G;
}

DsDerivativeReport ds_derivative_check(const CovOperator& c, const ExtractionOrder& order,
                                       const Eigen::VectorXd& s, double h, double tol) {
    DsDerivativeReport rep;
    InterpolatedCov ic(c, order, s);
    for (int q = 1; q <= ic.n_params(); ++q) {
        if (s[q - 1] - h < 0.0 || s[q - 1] + h > 1.0)
            throw std::invalid_argument("ds_derivative_check: s_q must be at least h from {0,1}");
        Eigen::VectorXd sp = s, sm = s;
        sp[q - 1] += h;
        sm[q - 1] -= h;
        Eigen::MatrixXcd bp = InterpolatedCov(c, order, sp).bs();
        Eigen::MatrixXcd bm = InterpolatedCov(c, order, sm).bs();
        Eigen::MatrixXcd fd = (bp - bm) / (2.0 * h);
        Eigen::MatrixXcd an = ic.dbs(q);
        double scale = std::max(an.cwiseAbs().maxCoeff(), 1e-12);
        double err = (an - fd).cwiseAbs().maxCoeff() / scale;
        rep.rel_err.push_back(err);
        rep.max_rel_err = std::max(rep.max_rel_err, err);
    }
    rep.pass = rep.max_rel_err <= tol;
    return rep;
}

}  // namespace rbmlab

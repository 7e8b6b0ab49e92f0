#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rbmlab/covariance.hpp"
#include "rbmlab/lattice.hpp"

namespace rbmlab {

// Ordered list of disjoint site groups (generalized cubes) whose union is the
// whole torus. Group 0 is the root; parameter s_q (q = 1..m, m = groups-1)
// couples V_{q-1} = union of the first q groups to its complement.
struct ExtractionOrder {
    std::vector<std::vector<int>> groups;
};

// Groups built from partition blocks taken in the given block order.
ExtractionOrder extraction_order_from_partition(const BlockPartition& part,
                                                const std::vector<int>& block_order);

// Interpolated covariance C(s)_ij = C_ij * prod of the s_q whose coupling
// step separates i from j; the pair (i,j) with group indices a < b picks up
// prod_{q=a+1}^{b} s_q.
class InterpolatedCov {
public:
    InterpolatedCov(const CovOperator& c, ExtractionOrder order, const Eigen::VectorXd& s);

    int n_params() const { return int(s_.size()); }
    const Eigen::VectorXd& s() const { return s_; }

    const Eigen::MatrixXd& cs() const { return cs_; }

    // B(s) = C(s) (1 + i sigma_E m_i^2 C(s))^{-1}; finite for all s in [0,1]^m
    Eigen::MatrixXcd bs() const;

    // G_q(s) = (1 + i sigma_E m_i^2 C(s))^{-1} with s_p = 1 for p > q;
    // depends only on s_1..s_q
    Eigen::MatrixXcd g(int q) const;

    Eigen::MatrixXd dcs(int q) const;       // dC(s)/ds_q
    Eigen::MatrixXcd dbs(int q) const;      // G(s) dcs(q) G(s), G = g(n_params)

private:
    Eigen::MatrixXd build_cs(int upto) const;
    double pair_multiplier(int gi, int gj, int upto) const;

    CovOperator base_;
    ExtractionOrder order_;
    Eigen::VectorXd s_;
    std::vector<int> group_of_;
    Eigen::MatrixXd cs_;
};

struct DsDerivativeReport {
    std::vector<double> rel_err;   // per parameter
    double max_rel_err = 0.0;
    bool pass = false;
};

// Central finite differences of B(s) against the analytic G dC G form.
DsDerivativeReport ds_derivative_check(const CovOperator& c, const ExtractionOrder& order,
                                       const Eigen::VectorXd& s, double h = 1e-4,
                                       double tol = 1e-6);

}  // namespace rbmlab

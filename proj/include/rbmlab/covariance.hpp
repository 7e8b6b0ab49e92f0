#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>
#include <vector>

#include "rbmlab/lattice.hpp"
#include "rbmlab/saddle.hpp"

namespace rbmlab {

// Lattice covariance kinds:
//   J        (-W^2 Lap + 1)^{-1}
//   C        (-W^2 Lap + m_r^2)^{-1}
//   B        (-W^2 Lap + m_r^2 + i sigma_E m_i^2)^{-1}, so B^{-1} = C^{-1} + i sigma_E m_i^2
//   Cf       (C^{-1} - f m_r^2)^{-1}, 0 <= f < 1
//   NeumannC same mass as C but with the block-Neumann Laplacian (no edges
//            across block boundaries), dense only
enum class CovKind { J, C, B, Cf, NeumannC };

std::string cov_kind_name(CovKind k);

struct CovOperator {
    CovKind kind = CovKind::J;
    TorusLattice lat{1, 1};
    double E = 0.0;
    double f = 0.0;
    double mr2 = 0.0;
    double mi2 = 0.0;
    int sigma_e = 1;

    // spectral data (translation-invariant kinds): one multiplier per Fourier
    // mode, indexed nx + L*ny, and the real-space row of site 0
    Eigen::ArrayXcd multipliers;
    Eigen::VectorXcd profile;

    // dense data (NeumannC only)
    Eigen::MatrixXcd dense;

    bool translation_invariant() const { return multipliers.size() > 0; }
    std::complex<double> entry(int i, int j) const;
    double real_entry(int i, int j) const { return entry(i, j).real(); }
    std::complex<double> row_sum() const;   // exact: multiplier of the zero mode
};

// Laplacian mode eigenvalues 2 sum_l (1 - cos k_l), k = 2 pi n / L, indexed
// nx + L*ny.
Eigen::ArrayXd laplacian_mode_eigenvalues(int L);

// Dense positive Laplacian -Lap with periodic edges (multigraph convention:
// L <= 2 tori carry doubled edges, keeping the mode formula exact).
Eigen::MatrixXd laplacian_dense(const TorusLattice& lat);

// Same but only edges interior to the blocks of the partition.
Eigen::MatrixXd laplacian_neumann_dense(const TorusLattice& lat, const BlockPartition& part);

CovOperator covariance(CovKind kind, const TorusLattice& lat, double E = 0.0, double f = 0.0);
CovOperator covariance_neumann(const TorusLattice& lat, const BlockPartition& part, double E);

// Dense matrix form of any covariance operator.
Eigen::MatrixXcd build_dense(const CovOperator& cov);

// ------------------------------------------------------------------
// decay diagnostics

struct DecayReport {
    std::string kind;
    int L = 0;
    int W = 0;
    double E = 0.0;
    bool precondition_ok = false;     // m_r |Lambda|^{1/2} > 1
    double min_entry = 0.0;           // positivity check, real kinds
    double fitted_K_near = 0.0;       // short-distance log-regime constant
    double fitted_K_tail = 0.0;       // exponential-regime prefactor
    double fitted_rate = 0.0;         // least-squares tail rate
    double bound_rate = 0.0;          // m_r / W
    int violations = 0;               // entries above the fitted envelopes
    std::array<double, 2> diag_lower_fit{0.0, 0.0};  // C_jj ~ K1 ln(W/m_r) + K2
    int b_le_c_violations = -1;       // kind B only, |B_ij| <= C_ij failures
    bool pass = false;
    // binned tail profile (distance, max |entry|) for reports
    std::vector<std::array<double, 2>> tail_profile;
};

// Checks the short-distance log bound, the exponential tail, positivity and
// the diagonal growth fit on a translation-invariant C or B operator.
DecayReport check_decay_bound(const CovOperator& cov);

// ------------------------------------------------------------------
// Schur mass bound: Re (B_Y)^{-1} >= m_r^2 on any site subset Y

struct SchurMassResult {
    double lambda_min = 0.0;
    double bound = 0.0;
    int subset_size = 0;
    bool pass = false;
};

SchurMassResult schur_mass_check(const CovOperator& bcov, const std::vector<int>& Y,
                                 double tol = 1e-10);

}  // namespace rbmlab

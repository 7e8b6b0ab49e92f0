#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "rbmlab/lattice.hpp"
#include "rbmlab/rng.hpp"
#include "rbmlab/saddle.hpp"

namespace rbmlab {

// int dchibar dchi e^{-(chibar, M chi)} against (2 pi)^{-n} det M.
struct GaussianCheckResult {
    int n = 0;
    std::complex<double> lhs, rhs;
    double abs_err = 0.0;
};
GaussianCheckResult fermionic_gaussian_check(const Eigen::MatrixXcd& m);

// Sign of the minor formula, from sorting the explicit top monomial:
// sigma_IJ = (-1)^|I| times the parity of the permutation that orders
// chibar_a chi_b pairs (order-preserving pairing of the complements) followed
// by the chi_I and chibar_J observables.  Index sets are 0-based.
int minor_sign(int n, const std::vector<int>& i_set, const std::vector<int>& j_set);

// int dchibar dchi e^{-(chibar, M chi)} prod_{i in I} chi_i prod_{j in J} chibar_j
// against sigma_IJ (2 pi)^{-n} det_{JI} M (rows J and columns I removed).
struct MinorCheckResult {
    std::complex<double> lhs, rhs;
    int sigma = 0;
    double abs_err = 0.0;
};
MinorCheckResult minor_formula_check(const Eigen::MatrixXcd& m, const std::vector<int>& i_set,
                                     const std::vector<int>& j_set);

// Mixed Gaussian superintegral on an (n|n) supermatrix whose odd blocks are
// spanned by n_dyads generator pairs: the Bosonic half is integrated in
// closed form, the Fermionic half symbolically, and the result is compared
// coefficientwise with Sdet of the block inverse.  identity_err is the
// largest coefficient of M^-1 M - Id.
struct SdetCheckResult {
    int n_sites = 0;
    int n_dyads = 0;
    double max_abs_err = 0.0;
    double identity_err = 0.0;
};
SdetCheckResult sdet_integral_check(int n_sites, int n_dyads, std::uint64_t seed);

// Single-site effective potential on the (1|1) supermatrix
// M = [[a, rhobar], [rho, i b]]:
//   cal V(M) = -ln Sdet[calE_bar - M] - calE Str M - calE^2/2 Str M^2,
// evaluated three ways: supermatrix algebra, the t-integral
// int_0^1 (1-t)^2 Str[M^3 (calE_bar - t M)^-3] dt, and the split form
// V(a) - V(ib) - D(a,b) rhobar rho.
struct PotentialSuperResult {
    std::complex<double> body;
    double err_tintegral = 0.0;  // max coefficient gap, algebra vs t-integral
    double err_body = 0.0;       // |body - (V(a) - V(ib))|
    double err_soul = 0.0;       // |coeff(rhobar rho) + D(a,b)|
    double err_linear = 0.0;     // largest linear-in-rho coefficient (must vanish)
};
PotentialSuperResult supermatrix_potential_check(double a, double b, const SaddleData& s);

// Fermionic sector of the dual weight: under dmu_B(rhobar, rho) the
// normalization is 1, two-point moments are <rhobar_p rho_q> = -B_qp, and a
// diagonal insertion exp(sum_j c_j rho_j rhobar_j) integrates to det(1 + cB).
struct SusyRepResult {
    int volume = 0;
    double norm_err = 0.0;
    double moment_err = 0.0;
    double det_err = 0.0;
};
SusyRepResult susy_rep_check(const TorusLattice& lat, double energy, std::uint64_t seed);

// Gaussian integration by parts for the supermatrix measure dmu_J:
//   <Str M_j F> = sum_k J_kj <Str d_{M_k} F>,
// with Str d_M = d_a - i d_b.  Both sides are evaluated exactly (Wick for the
// Bosonic sector, symbolic for the Fermionic one) for a family of polynomial
// functionals; the variant with the derivative pinned at site j instead of
// the summation index is evaluated alongside for contrast.
struct IbpFunctionalResult {
    std::string name;
    std::complex<double> lhs;
    std::complex<double> rhs_summed;  // derivative at the summed index k
    std::complex<double> rhs_pinned;  // derivative pinned at j
};
struct IbpReport {
    std::vector<IbpFunctionalResult> functionals;
    double max_err_summed = 0.0;
    double min_gap_pinned = 0.0;  // over functionals that separate the readings
    bool decisive = false;
};
IbpReport ibp_check(const TorusLattice& lat, int j_site);

// E_H[e^{-i(zbar, H z)}] = e^{-1/2 sum_ij J_ij |z_i|^2 |z_j|^2} and its
// Fermionic counterpart.  The one-site case is checked by quadrature, the
// Grassmann variant termwise by Wick pairing of matrix entries, and the L=2
// Bosonic case by Monte Carlo.
struct HsIdentityResult {
    double analytic_err = 0.0;      // one site, quadrature vs closed form
    double grassmann_err = 0.0;     // termwise expansion vs engine exponential
    std::complex<double> mc_value;  // L = 2 sample mean
    std::complex<double> mc_rhs;
    double mc_sigma = 0.0;  // distance in combined standard errors
    long mc_samples = 0;
};
HsIdentityResult hs_identity_check(long n_samples, std::uint64_t seed);

}  // namespace rbmlab

#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "rbmlab/covariance.hpp"
#include "rbmlab/lattice.hpp"
#include "rbmlab/rng.hpp"
#include "rbmlab/saddle.hpp"

namespace rbmlab {

// Observables for the contour-deformed representation at eps = 0. The complex
// measure dmu_B is never sampled directly: fields are drawn from dmu_C and
// reweighted with the exact factor det(1 + i sigma m_i^2 C) *
// exp(-i sigma m_i^2 (|a|^2 + |b|^2) / 2).
enum class DeformedObservable {
    GaussOne,  // E_B[1]            = 1 (complex-Gaussian normalization)
    R,         // E_B[R]            = 1 (remainder normalization)
    RA0,       // a_s+ + E_B[R a_0] = lim_{eps->0} (1/|Lambda|) E[Tr G+]
};

struct DeformedEstimate {
    MCEstimate mc;                               // reported value (incl. a_s+ for RA0)
    std::complex<double> a_s_plus{0.0, 0.0};
    std::complex<double> det_factor{1.0, 0.0};   // det(1 + i sigma m_i^2 C)
    double ess_fraction = 0.0;                   // ess / n_samples
};

DeformedEstimate deformed_expectation(const TorusLattice& lat, double E, DeformedObservable obs,
                                      long n_samples, std::uint64_t seed, int n_workers = 1);

// E over dmu_{B_Y} of det[1 + D B_Y] exp(V_Y) for a site subset Y, where B_Y
// is the full-torus B restricted to Y. Equals 1 for every Y: integrals over
// volumes without observables are trivial.
MCEstimate subvolume_norm_check(const TorusLattice& lat, double E, const std::vector<int>& sites,
                                long n_samples, std::uint64_t seed, int n_workers = 1);

// ------------------------------------------------------------------
// region partition of field space

// I1: |a_j| <= d, |b_j - b_j'| <= d, |b_0| <= 2d        (main saddle)
// I2: |a_j| <= d, |b_j - b_j'| <= d, |b_0 - 2 E_i| <= 2d (second saddle)
// I3: some |a_j0| > d
// I4: all |a_j| <= d, some |b_j0 - b_j0'| > d
// I5: small fields, b_0 far from both saddle values
struct RegionLabel {
    int region = 0;     // 1..5
    int j0 = -1;        // witness site (I3: large a; I4: max b)
    int j0p = -1;       // second witness (I4: min b)
    double delta = 0.0;
};

RegionLabel classify_region(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double delta,
                            const SaddleData& sd);

struct RegionStat {
    long count = 0;
    double probability = 0.0;   // E_C[chi_s]
    double prob_se = 0.0;
    double contribution = 0.0;  // E_C[chi_s e^{Re Tr DB + Re V}]
    double contrib_se = 0.0;
};

struct RegionReport {
    int L = 0;
    double W = 0.0;
    double E = 0.0;
    double nu = 0.0;
    double delta = 0.0;
    long n_samples = 0;
    std::array<RegionStat, 5> regions{};
    double total = 0.0;             // E_C[e^{Re Tr DB + Re V}], all samples
    double total_se = 0.0;
    double partition_defect = 0.0;  // |sum_s contribution_s - total|
};

RegionReport region_report(const TorusLattice& lat, double E, double nu, long n_samples,
                           std::uint64_t seed, int n_workers = 1);

// Lagrange weights at eps = 0 through the given nodes; for {0.4, 0.2, 0.1}
// these are {1/3, -2, 8/3} and the eps and eps^2 errors cancel.
std::vector<double> richardson_weights(const std::vector<double>& eps);

}  // namespace rbmlab

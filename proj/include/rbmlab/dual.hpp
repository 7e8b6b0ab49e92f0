#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>

#include "rbmlab/covariance.hpp"
#include "rbmlab/lattice.hpp"
#include "rbmlab/rng.hpp"

namespace rbmlab {

// Dual-side integrand at fields (a, b):
//   prod_j (E_eps - i b_j) / (E_eps - a_j) * det(1 - F J),
// F = diag( 1 / ((E_eps - a_j)(E_eps - i b_j)) ). Computed in log space.
std::complex<double> dual_integrand(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double E,
                                    double eps, const Eigen::MatrixXd& j_dense);

enum class DualObservable {
    One,       // normalization, exact value 1
    A0,        // a_0: recovers (1/|Lambda|) E Tr G^+
    SumStr1,   // a_0 * sum_j (a_j - i b_j): d/dE observable
    SumStr2,   // a_0 * (sum_j (a_j - i b_j))^2
};

// MC average of integrand * observable over (a,b) ~ N(0, J) x N(0, J).
MCEstimate dual_expectation(const TorusLattice& lat, double E, double eps, DualObservable obs,
                            long n_samples, std::uint64_t seed, int n_workers);

// Same but over an explicit covariance matrix (sub-volume restrictions).
MCEstimate dual_expectation_dense(const Eigen::MatrixXd& j_dense, double E, double eps,
                                  DualObservable obs, long n_samples, std::uint64_t seed,
                                  int n_workers);

// d^n/dE^n of the mean normalized trace through the dual side. The shift
// a -> a + d, b -> b - i d absorbs E -> E + d and differentiating the
// observable (a_0 + d) e^{-d sum(a - i b)} gives
//   n = 1:  1 - E[psi a_0 S],      n = 2:  E[psi a_0 S^2]
// (the printed form of the identity drops the constant for n = 1; the
// |Lambda| = 1 quadrature oracle below pins the corrected version).
MCEstimate dual_derivative(const TorusLattice& lat, double E, double eps, int n, long n_samples,
                           std::uint64_t seed, int n_workers);

// |Lambda| = 1 oracles by adaptive quadrature: both sides of the duality.
std::complex<double> volume_one_direct_quadrature(double E, double eps);
std::complex<double> volume_one_dual_quadrature(double E, double eps,
                                                DualObservable obs = DualObservable::A0);

// MC average of (1/n) Tr (E + i eps - H)^{-1} over band-matrix draws.
MCEstimate direct_expectation(const TorusLattice& lat, double E, double eps, long n_samples,
                              std::uint64_t seed, int n_workers);

// Central finite-difference derivative estimate assembled from direct runs at
// E +/- h (independent streams); se combines both runs.
MCEstimate direct_expectation_de(const TorusLattice& lat, double E, double eps, double h,
                                 long n_samples, std::uint64_t seed, int n_workers);

}  // namespace rbmlab

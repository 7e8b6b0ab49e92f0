#pragma once

#include <Eigen/Dense>
#include <complex>

#include "rbmlab/saddle.hpp"

namespace rbmlab {

// Effective single-site potential
//   V(x) = sum_{k>=3} (calE x)^k / k
//        = -Log(1 - calE x) - calE x - (calE x)^2 / 2,
// finite for real x always, and for purely imaginary x whenever E != 0.
std::complex<double> potential_v(std::complex<double> x, const SaddleData& s);

// Same via adaptive quadrature of int_0^1 x^3 (1-t)^2 / (calE_bar - t x)^3 dt.
std::complex<double> potential_v_quadrature(std::complex<double> x, const SaddleData& s);

// Soul coefficient D(a,b) = calE^2 - 1/((calE_bar - a)(calE_bar - i b)).
std::complex<double> d_term(std::complex<double> a, std::complex<double> b, const SaddleData& s);

// Equivalent t-integral form of D(a,b).
std::complex<double> d_term_quadrature(std::complex<double> a, std::complex<double> b,
                                       const SaddleData& s);

// sum_j V(a_j) - V(i b_j)
std::complex<double> script_v(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                              const SaddleData& s);

struct RemainderResult {
    std::complex<double> value{0.0, 0.0};
    std::complex<double> log_value{0.0, 0.0};
    bool warned_e_zero = false;   // E = 0 sits on a removable singularity
};

// R(a,b) = det(1 + D B) exp(script_v), with D = diag(D(a_j, b_j)).
RemainderResult remainder_r(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                            const SaddleData& s, const Eigen::MatrixXcd& b_dense);

}  // namespace rbmlab

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace rbmlab::linalg {

using cd = std::complex<double>;

// Eigenvalues (ascending) of a Hermitian matrix. Dispatches to LAPACK zheev
// for large n; the argument is taken by value because the factorization
// destroys it.
Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd A);

// Pivoted LU of a general complex matrix, kept for repeated solves and
// log-determinants. Phase is accumulated factor by factor so the result is
// overflow-free for large n.
class LuFactor {
public:
    explicit LuFactor(Eigen::MatrixXcd A);

    cd log_det() const { return log_det_; }
    bool singular() const { return singular_; }

    // X solving A X = rhs (zgetrs on the stored factors)
    Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;

private:
    Eigen::MatrixXcd lu_;
    std::vector<int> ipiv_;
    cd log_det_{0.0, 0.0};
    bool singular_ = false;
};

// log det A with continuous per-factor phase accumulation
cd log_det(const Eigen::MatrixXcd& A);
cd log_det(const Eigen::MatrixXd& A);

// Symmetric square root C^{1/2} of a real SPD matrix via eigendecomposition.
Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& C);

}  // namespace rbmlab::linalg

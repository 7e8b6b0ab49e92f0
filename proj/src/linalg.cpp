#include "rbmlab/linalg.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <cmath>
#include <stdexcept>

namespace rbmlab::linalg {

Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd A) {
    const int n = int(A.rows());
    if (A.cols() != n) throw std::invalid_argument("hermitian_eigenvalues: square matrix required");
    Eigen::VectorXd w(n);
    if (n == 0) return w;
    int info = LAPACKE_zheev(LAPACK_COL_MAJOR, 'N', 'L', n, A.data(), n, w.data());
    if (info != 0) throw std::runtime_error("zheev failed, info=" + std::to_string(info));
    return w;
}

LuFactor::LuFactor(Eigen::MatrixXcd A) : lu_(std::move(A)) {
    const int n = int(lu_.rows());
    if (lu_.cols() != n) throw std::invalid_argument("LuFactor: square matrix required");
    ipiv_.resize(n);
    if (n == 0) return;
    int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, lu_.data(), n, ipiv_.data());
    if (info < 0) throw std::runtime_error("zgetrf failed, info=" + std::to_string(info));
    if (info > 0) { singular_ = true; return; }
    cd ld(0.0, 0.0);
    int sign = 1;
    for (int i = 0; i < n; ++i) {
        cd u = lu_(i, i);
        ld += cd(std::log(std::abs(u)), std::arg(u));
        if (ipiv_[i] != i + 1) sign = -sign;   // LAPACK pivots are 1-based
    }
    if (sign < 0) ld += cd(0.0, M_PI);
    log_det_ = ld;
}

Eigen::MatrixXcd LuFactor::solve(const Eigen::MatrixXcd& rhs) const {
    if (singular_) throw std::runtime_error("LuFactor::solve: singular matrix");
    Eigen::MatrixXcd x = rhs;
    const int n = int(lu_.rows());
    const int nrhs = int(rhs.cols());
    int info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, nrhs, lu_.data(), n,
                              ipiv_.data(), x.data(), n);
    if (info != 0) throw std::runtime_error("zgetrs failed, info=" + std::to_string(info));
    return x;
}

cd log_det(const Eigen::MatrixXcd& A) {
    LuFactor lu(A);
    if (lu.singular()) throw std::runtime_error("log_det: singular matrix");
    return lu.log_det();
}

cd log_det(const Eigen::MatrixXd& A) {
    return log_det(Eigen::MatrixXcd(A.cast<cd>()));
}

Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& C) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    if (es.info() != Eigen::Success) throw std::runtime_error("spd_sqrt: eigensolver failed");
    if (es.eigenvalues().minCoeff() < 0.0) {
        // tolerate tiny negative roundoff only
        if (es.eigenvalues().minCoeff() < -1e-12 * std::abs(es.eigenvalues().maxCoeff()))
            throw std::runtime_error("spd_sqrt: matrix not positive semidefinite");
    }
    Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace rbmlab::linalg

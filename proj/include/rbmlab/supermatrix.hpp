#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "rbmlab/grassmann.hpp"

namespace rbmlab {

// Small matrix with Grassmann-algebra entries.  Products keep the entry order
// of the defining sums, so blocks of odd elements are handled correctly;
// determinant and inverse are defined only when every entry is even, where
// the entries form a commutative subring.
class GradedMatrix {
  public:
    GradedMatrix(int rows, int cols, int n_gen);
    static GradedMatrix identity(int n, int n_gen);
    static GradedMatrix from_complex(const Eigen::MatrixXcd& m, int n_gen);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int n_generators() const { return n_gen_; }

    GrassmannElement& at(int i, int j) { return data_[std::size_t(i * cols_ + j)]; }
    const GrassmannElement& at(int i, int j) const { return data_[std::size_t(i * cols_ + j)]; }

    GradedMatrix operator+(const GradedMatrix& o) const;
    GradedMatrix operator-(const GradedMatrix& o) const;
    GradedMatrix operator*(const GradedMatrix& o) const;
    friend GradedMatrix operator*(const GrassmannElement& c, GradedMatrix m);

    bool all_even() const;

    // Leibniz determinant; requires square shape and even entries.
    GrassmannElement determinant() const;
    // Adjugate inverse; requires determinant with nonzero body.
    GradedMatrix inverse() const;

  private:
    int rows_, cols_, n_gen_;
    std::vector<GrassmannElement> data_;
};

// (p|q) supermatrix [[a, sigma], [rho, b]]: a, b carry even entries, sigma
// and rho odd ones.
struct SuperMatrix {
    GradedMatrix a, sigma, rho, b;

    SuperMatrix(int p, int q, int n_gen);
    static SuperMatrix scalar_identity(int p, int q, int n_gen, std::complex<double> c);

    int p() const { return a.rows(); }
    int q() const { return b.rows(); }

    SuperMatrix operator-(const SuperMatrix& o) const;
    SuperMatrix operator*(const SuperMatrix& o) const;

    // Str M = Tr a - Tr b
    GrassmannElement str() const;
    // Sdet M = det[a - sigma b^-1 rho] det[b^-1]
    GrassmannElement sdet() const;
    // Block inverse [[S^-1, -S^-1 sigma b^-1],
    //                [-b^-1 rho S^-1, b^-1 + b^-1 rho S^-1 sigma b^-1]],
    // with the Schur complement S = a - sigma b^-1 rho.
    SuperMatrix inverse() const;
};

}  // namespace rbmlab

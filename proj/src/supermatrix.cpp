#include "rbmlab/supermatrix.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rbmlab {

namespace {

using cd = std::complex<double>;

int permutation_sign(const std::vector<int>& p) {
    int inversions = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++inversions;
    return (inversions & 1) ? -1 : 1;
}

}  // namespace

GradedMatrix::GradedMatrix(int rows, int cols, int n_gen)
    : rows_(rows), cols_(cols), n_gen_(n_gen) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("GradedMatrix: negative shape");
    data_.assign(std::size_t(rows) * std::size_t(cols), GrassmannElement(n_gen));
}

GradedMatrix GradedMatrix::identity(int n, int n_gen) {
    GradedMatrix m(n, n, n_gen);
    for (int i = 0; i < n; ++i) m.at(i, i) = GrassmannElement::scalar(n_gen, cd(1.0, 0.0));
    return m;
}

GradedMatrix GradedMatrix::from_complex(const Eigen::MatrixXcd& src, int n_gen) {
    GradedMatrix m(int(src.rows()), int(src.cols()), n_gen);
    for (int i = 0; i < src.rows(); ++i)
        for (int j = 0; j < src.cols(); ++j)
            m.at(i, j) = GrassmannElement::scalar(n_gen, src(i, j));
    return m;
}

GradedMatrix GradedMatrix::operator+(const GradedMatrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_)
        throw std::invalid_argument("GradedMatrix: shape mismatch");
    GradedMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
    return out;
}

GradedMatrix GradedMatrix::operator-(const GradedMatrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_)
        throw std::invalid_argument("GradedMatrix: shape mismatch");
    GradedMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= o.data_[i];
    return out;
}

GradedMatrix GradedMatrix::operator*(const GradedMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("GradedMatrix: shape mismatch");
    GradedMatrix out(rows_, o.cols_, n_gen_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < o.cols_; ++j) {
            GrassmannElement s(n_gen_);
            for (int k = 0; k < cols_; ++k) s += at(i, k) * o.at(k, j);
            out.at(i, j) = s;
        }
    return out;
}

GradedMatrix operator*(const GrassmannElement& c, GradedMatrix m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m.at(i, j) = c * m.at(i, j);
    return m;
}

bool GradedMatrix::all_even() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const GrassmannElement& e) { return e.is_even(); });
}

GrassmannElement GradedMatrix::determinant() const {
    if (rows_ != cols_) throw std::invalid_argument("GradedMatrix::determinant: not square");
    if (!all_even()) throw std::invalid_argument("GradedMatrix::determinant: odd entries");
    if (rows_ == 0) return GrassmannElement::scalar(n_gen_, cd(1.0, 0.0));
    std::vector<int> perm(static_cast<std::size_t>(rows_));
    std::iota(perm.begin(), perm.end(), 0);
    GrassmannElement det(n_gen_);
    do {
        GrassmannElement term = GrassmannElement::scalar(n_gen_, cd(double(permutation_sign(perm)), 0.0));
        for (int i = 0; i < rows_; ++i) term = term * at(i, perm[std::size_t(i)]);
        det += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

GradedMatrix GradedMatrix::inverse() const {
    const GrassmannElement inv_det = determinant().inverse();
    GradedMatrix adj(rows_, cols_, n_gen_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            GradedMatrix minor(rows_ - 1, cols_ - 1, n_gen_);
            for (int r = 0, mr = 0; r < rows_; ++r) {
                if (r == j) continue;
                for (int c = 0, mc = 0; c < cols_; ++c) {
                    if (c == i) continue;
                    minor.at(mr, mc) = at(r, c);
                    ++mc;
                }
                ++mr;
            }
            const double sign = ((i + j) & 1) ? -1.0 : 1.0;
            adj.at(i, j) = cd(sign, 0.0) * (minor.determinant() * inv_det);
        }
    return adj;
}

SuperMatrix::SuperMatrix(int p, int q, int n_gen)
    : a(p, p, n_gen), sigma(p, q, n_gen), rho(q, p, n_gen), b(q, q, n_gen) {}

SuperMatrix SuperMatrix::scalar_identity(int p, int q, int n_gen, cd c) {
    SuperMatrix m(p, q, n_gen);
    const GrassmannElement ce = GrassmannElement::scalar(n_gen, c);
    m.a = ce * GradedMatrix::identity(p, n_gen);
    m.b = ce * GradedMatrix::identity(q, n_gen);
    return m;
}

SuperMatrix SuperMatrix::operator-(const SuperMatrix& o) const {
    SuperMatrix out(p(), q(), a.n_generators());
    out.a = a - o.a;
    out.sigma = sigma - o.sigma;
    out.rho = rho - o.rho;
    out.b = b - o.b;
    return out;
}

SuperMatrix SuperMatrix::operator*(const SuperMatrix& o) const {
    SuperMatrix out(p(), o.q(), a.n_generators());
    out.a = a * o.a + sigma * o.rho;
    out.sigma = a * o.sigma + sigma * o.b;
    out.rho = rho * o.a + b * o.rho;
    out.b = rho * o.sigma + b * o.b;
    return out;
}

GrassmannElement SuperMatrix::str() const {
    GrassmannElement s(a.n_generators());
    for (int i = 0; i < p(); ++i) s += a.at(i, i);
    for (int i = 0; i < q(); ++i) s -= b.at(i, i);
    return s;
}

GrassmannElement SuperMatrix::sdet() const {
    const GradedMatrix b_inv = b.inverse();
    const GradedMatrix schur = a - sigma * b_inv * rho;
    return schur.determinant() * b_inv.determinant();
}

SuperMatrix SuperMatrix::inverse() const {
    const GradedMatrix b_inv = b.inverse();
    const GradedMatrix s_inv = (a - sigma * b_inv * rho).inverse();
    SuperMatrix out(p(), q(), a.n_generators());
    out.a = s_inv;
    out.sigma = GrassmannElement::scalar(a.n_generators(), cd(-1.0, 0.0)) * (s_inv * sigma * b_inv);
    out.rho = GrassmannElement::scalar(a.n_generators(), cd(-1.0, 0.0)) * (b_inv * rho * s_inv);
    out.b = b_inv + b_inv * rho * s_inv * sigma * b_inv;
    return out;
}

}  // namespace rbmlab

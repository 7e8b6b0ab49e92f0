#include "rbmlab/potential.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

#include "rbmlab/linalg.hpp"

namespace rbmlab {

using cd = std::complex<double>;

namespace {

template <class F>
cd integrate01(F&& f, double tol = 1e-13) {
    using boost::math::quadrature::gauss_kronrod;
    auto re = gauss_kronrod<double, 31>::integrate([&](double t) { return f(t).real(); }, 0.0,
                                                   1.0, 12, tol);
    auto im = gauss_kronrod<double, 31>::integrate([&](double t) { return f(t).imag(); }, 0.0,
                                                   1.0, 12, tol);
    return {re, im};
}

void check_pole_free(cd x, const SaddleData& s) {
    // pole of the t-integrand at calE_bar = t x, t in [0,1]
    cd eb = s.calE_bar;
    double x2 = std::norm(x);
    if (x2 == 0.0) return;
    double t = std::clamp((eb.real() * x.real() + eb.imag() * x.imag()) / x2, 0.0, 1.0);
    if (std::abs(eb - t * x) < 1e-9)
        throw std::domain_error("potential: integrand pole on the t-segment");
}

}  // namespace

cd potential_v(cd x, const SaddleData& s) {
    cd u = s.calE * x;
    if (u.imag() == 0.0 && u.real() >= 1.0 - 1e-12)
        throw std::domain_error("potential_v: branch point reached (E = 0 pole line)");
    if (std::abs(u) <= 0.5) {
        // series sum_{k>=3} u^k / k, geometric convergence
        cd term = u * u * u;
        cd sum = term / 3.0;
        for (int k = 4; k <= 80; ++k) {
            term *= u;
            cd add = term / double(k);
            sum += add;
            if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
        }
        return sum;
    }
    return -std::log(1.0 - u) - u - 0.5 * u * u;
}

cd potential_v_quadrature(cd x, const SaddleData& s) {
    check_pole_free(x, s);
    cd eb = s.calE_bar;
    return integrate01([&](double t) {
        double om = 1.0 - t;
        cd den = eb - t * x;
        return x * x * x * om * om / (den * den * den);
    });
}

cd d_term(cd a, cd b, const SaddleData& s) {
    cd eb = s.calE_bar;
    return s.calE * s.calE - 1.0 / ((eb - a) * (eb - cd(0.0, 1.0) * b));
}

cd d_term_quadrature(cd a, cd b, const SaddleData& s) {
    check_pole_free(a, s);
    check_pole_free(cd(0.0, 1.0) * b, s);
    cd eb = s.calE_bar;
    cd ib = cd(0.0, 1.0) * b;
    return -integrate01([&](double t) {
        cd da = eb - t * a;
        cd db = eb - t * ib;
        return a / (da * da * db) + ib / (da * db * db);
    });
}

cd script_v(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const SaddleData& s) {
    if (a.size() != b.size()) throw std::invalid_argument("script_v: field size mismatch");
    cd sum{0.0, 0.0};
    for (int j = 0; j < a.size(); ++j)
        sum += potential_v(cd(a[j], 0.0), s) - potential_v(cd(0.0, b[j]), s);
    return sum;
}

RemainderResult remainder_r(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                            const SaddleData& s, const Eigen::MatrixXcd& b_dense) {
    const int n = int(a.size());
    if (b.size() != n || b_dense.rows() != n || b_dense.cols() != n)
        throw std::invalid_argument("remainder_r: size mismatch");
    RemainderResult out;
    out.warned_e_zero = s.E == 0.0;
    Eigen::MatrixXcd M = b_dense;
    for (int j = 0; j < n; ++j) {
        cd dj = d_term(cd(a[j], 0.0), cd(b[j], 0.0), s);
        M.row(j) *= dj;
    }
    M += Eigen::MatrixXcd::Identity(n, n);
    out.log_value = linalg::log_det(M) + script_v(a, b, s);
    out.value = std::exp(out.log_value);
    return out;
}

}  // namespace rbmlab

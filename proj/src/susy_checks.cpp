#include "rbmlab/susy_checks.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "rbmlab/covariance.hpp"
#include "rbmlab/ensemble.hpp"
#include "rbmlab/grassmann.hpp"
#include "rbmlab/potential.hpp"
#include "rbmlab/supermatrix.hpp"

namespace rbmlab {

namespace {

using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

// Generator layout for paired families: bar variable of site j at 2j, the
// unbarred one at 2j + 1.
int bar_gen(int j) { return 2 * j; }
int ung_gen(int j) { return 2 * j + 1; }

// sum_{p,q} m_pq bar_p unbar_q as an engine element
GrassmannElement quadratic_form(const MatrixXcd& m, int n_gen) {
    const int n = int(m.rows());
    GrassmannElement x(n_gen);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            if (m(p, q) == cd(0.0, 0.0)) continue;
            x += m(p, q) * (GrassmannElement::generator(n_gen, bar_gen(p)) *
                            GrassmannElement::generator(n_gen, ung_gen(q)));
        }
    return x;
}

std::vector<int> all_pair_differentials(int n_sites) {
    std::vector<int> d;
    for (int j = 0; j < n_sites; ++j) {
        d.push_back(bar_gen(j));
        d.push_back(ung_gen(j));
    }
    return d;
}

template <class F>
cd integrate01_cd(F&& f, double tol = 1e-13) {
    using boost::math::quadrature::gauss_kronrod;
    auto re = gauss_kronrod<double, 31>::integrate([&](double t) { return f(t).real(); }, 0.0,
                                                   1.0, 12, tol);
    auto im = gauss_kronrod<double, 31>::integrate([&](double t) { return f(t).imag(); }, 0.0,
                                                   1.0, 12, tol);
    return {re, im};
}

double max_coeff_diff(const GrassmannElement& a, const GrassmannElement& b) {
    GrassmannElement d = a;
    d -= b;
    return d.max_abs_coeff();
}

// Real Gaussian Wick moment E[prod_r x_{idx_r}] with covariance c.
double wick_moment(const MatrixXd& c, const std::vector<int>& idx) {
    if (idx.empty()) return 1.0;
    if (idx.size() % 2 != 0) return 0.0;
    double total = 0.0;
    for (std::size_t k = 1; k < idx.size(); ++k) {
        std::vector<int> rest;
        for (std::size_t r = 1; r < idx.size(); ++r)
            if (r != k) rest.push_back(idx[r]);
        total += c(idx[0], idx[k]) * wick_moment(c, rest);
    }
    return total;
}

}  // namespace

// ------------------------------------------------------------------
// Gaussian and minor formulas

GaussianCheckResult fermionic_gaussian_check(const MatrixXcd& m) {
    const int n = int(m.rows());
    const int n_gen = 2 * n;
    GaussianCheckResult r;
    r.n = n;
    const GrassmannElement weight = (cd(-1.0, 0.0) * quadratic_form(m, n_gen)).exp();
    r.lhs = berezin_integrate(weight, all_pair_differentials(n)).body();
    r.rhs = std::pow(kTwoPi, -n) * m.determinant();
    r.abs_err = std::abs(r.lhs - r.rhs);
    return r;
}

int minor_sign(int n, const std::vector<int>& i_set, const std::vector<int>& j_set) {
    std::vector<bool> in_i(std::size_t(n), false), in_j(std::size_t(n), false);
    for (int i : i_set) in_i[std::size_t(i)] = true;
    for (int j : j_set) in_j[std::size_t(j)] = true;
    // Written order of the surviving top monomial: bar/unbar pairs over the
    // complements, then the chi observables, then the chibar ones.
    std::vector<int> seq;
    std::vector<int> bar_c, ung_c;
    for (int s = 0; s < n; ++s) {
        if (!in_j[std::size_t(s)]) bar_c.push_back(s);
        if (!in_i[std::size_t(s)]) ung_c.push_back(s);
    }
    for (std::size_t r = 0; r < bar_c.size(); ++r) {
        seq.push_back(bar_gen(bar_c[r]));
        seq.push_back(ung_gen(ung_c[r]));
    }
    for (int i : i_set) seq.push_back(ung_gen(i));
    for (int j : j_set) seq.push_back(bar_gen(j));
    int inversions = 0;
    for (std::size_t a = 0; a < seq.size(); ++a)
        for (std::size_t b = a + 1; b < seq.size(); ++b)
            if (seq[a] > seq[b]) ++inversions;
    return ((int(i_set.size()) + inversions) % 2 == 0) ? 1 : -1;
}

MinorCheckResult minor_formula_check(const MatrixXcd& m, const std::vector<int>& i_set,
                                     const std::vector<int>& j_set) {
    const int n = int(m.rows());
    const int n_gen = 2 * n;
    MinorCheckResult r;
    GrassmannElement obs = GrassmannElement::scalar(n_gen, cd(1.0, 0.0));
    for (int i : i_set) obs = obs * GrassmannElement::generator(n_gen, ung_gen(i));
    for (int j : j_set) obs = obs * GrassmannElement::generator(n_gen, bar_gen(j));
    const GrassmannElement weight = (cd(-1.0, 0.0) * quadratic_form(m, n_gen)).exp();
    r.lhs = berezin_integrate(weight * obs, all_pair_differentials(n)).body();

    if (i_set.size() != j_set.size()) {
        r.sigma = 0;
        r.rhs = cd(0.0, 0.0);
    } else {
        const int k = int(i_set.size());
        MatrixXcd minor(n - k, n - k);
        std::vector<bool> in_i(std::size_t(n), false), in_j(std::size_t(n), false);
        for (int i : i_set) in_i[std::size_t(i)] = true;
        for (int j : j_set) in_j[std::size_t(j)] = true;
        int rr = 0;
        for (int row = 0; row < n; ++row) {
            if (in_j[std::size_t(row)]) continue;
            int cc = 0;
            for (int col = 0; col < n; ++col) {
                if (in_i[std::size_t(col)]) continue;
                minor(rr, cc++) = m(row, col);
            }
            ++rr;
        }
        r.sigma = minor_sign(n, i_set, j_set);
        const cd det = (n - k == 0) ? cd(1.0, 0.0) : minor.determinant();
        r.rhs = double(r.sigma) * std::pow(kTwoPi, -n) * det;
    }
    r.abs_err = std::abs(r.lhs - r.rhs);
    return r;
}

// ------------------------------------------------------------------
// superdeterminant integral

SdetCheckResult sdet_integral_check(int n_sites, int n_dyads, std::uint64_t seed) {
    const int n = n_sites;
    const int s = n_dyads;
    const int n_gen = 2 * n + 2 * s;
    auto rng = make_stream(seed, 0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto cgauss = [&]() { return cd(gauss(rng), gauss(rng)); };

    MatrixXcd a_num(n, n), b_num(n, n);
    for (;;) {  // positive definite Hermitian part keeps the z-integral convergent
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                a_num(i, j) = (i == j ? cd(1.0, 0.0) : cd(0.0, 0.0)) + 0.15 * cgauss();
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (a_num + a_num.adjoint()));
        if (es.eigenvalues().minCoeff() > 0.2) break;
    }
    for (;;) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                b_num(i, j) = (i == j ? cd(1.0, 0.0) : cd(0.0, 0.0)) + 0.15 * cgauss();
        if (std::abs(b_num.determinant()) > 0.2) break;
    }

    // odd blocks spanned by s generator pairs eta_r (in sigma), etabar_r (in rho)
    GradedMatrix sig(n, n, n_gen), rho(n, n, n_gen);
    for (int r = 0; r < s; ++r) {
        const GrassmannElement eta = GrassmannElement::generator(n_gen, 2 * n + 2 * r + 1);
        const GrassmannElement etab = GrassmannElement::generator(n_gen, 2 * n + 2 * r);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                sig.at(i, j) += (0.5 * cgauss()) * eta;
                rho.at(i, j) += (0.5 * cgauss()) * etab;
            }
    }

    // Bosonic integral in closed form leaves the Fermionic weight
    // exp(-(chibar, [b - rho a^-1 sigma] chi)) carrying the dyads.
    const MatrixXcd a_inv = a_num.inverse();
    const GradedMatrix n_eff = GradedMatrix::from_complex(b_num, n_gen) -
                               rho * GradedMatrix::from_complex(a_inv, n_gen) * sig;
    GrassmannElement x(n_gen);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            x -= GrassmannElement::generator(n_gen, bar_gen(k)) * n_eff.at(k, j) *
                 GrassmannElement::generator(n_gen, ung_gen(j));
    GrassmannElement lhs = berezin_integrate(x.exp(), all_pair_differentials(n));
    lhs *= std::pow(kTwoPi, n) / a_num.determinant();

    SuperMatrix m(n, n, n_gen);
    m.a = GradedMatrix::from_complex(a_num, n_gen);
    m.b = GradedMatrix::from_complex(b_num, n_gen);
    m.sigma = sig;
    m.rho = rho;
    const GrassmannElement rhs = m.inverse().sdet();

    SdetCheckResult res;
    res.n_sites = n;
    res.n_dyads = s;
    res.max_abs_err = max_coeff_diff(lhs, rhs);

    const SuperMatrix prod = m * m.inverse();
    double id_err = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cd unit = (i == j) ? cd(1.0, 0.0) : cd(0.0, 0.0);
            id_err = std::max(id_err, max_coeff_diff(prod.a.at(i, j),
                                                     GrassmannElement::scalar(n_gen, unit)));
            id_err = std::max(id_err, max_coeff_diff(prod.b.at(i, j),
                                                     GrassmannElement::scalar(n_gen, unit)));
            id_err = std::max(id_err, prod.sigma.at(i, j).max_abs_coeff());
            id_err = std::max(id_err, prod.rho.at(i, j).max_abs_coeff());
        }
    res.identity_err = id_err;
    return res;
}

// ------------------------------------------------------------------
// single-site potential on the (1|1) supermatrix

PotentialSuperResult supermatrix_potential_check(double a, double b, const SaddleData& s) {
    const int n_gen = 2;
    SuperMatrix m(1, 1, n_gen);
    m.a.at(0, 0) = GrassmannElement::scalar(n_gen, cd(a, 0.0));
    m.b.at(0, 0) = GrassmannElement::scalar(n_gen, cd(0.0, b));
    m.sigma.at(0, 0) = GrassmannElement::generator(n_gen, 0);  // rhobar
    m.rho.at(0, 0) = GrassmannElement::generator(n_gen, 1);    // rho

    const SuperMatrix shifted = SuperMatrix::scalar_identity(1, 1, n_gen, s.calE_bar) - m;
    GrassmannElement v_super = cd(-1.0, 0.0) * shifted.sdet().log();
    v_super -= s.calE * m.str();
    v_super -= (0.5 * s.calE * s.calE) * (m * m).str();

    const SuperMatrix m3 = m * m * m;
    auto integrand = [&](double t) {
        SuperMatrix mt = SuperMatrix::scalar_identity(1, 1, n_gen, s.calE_bar);
        const GrassmannElement ts = GrassmannElement::scalar(n_gen, cd(t, 0.0));
        mt.a = mt.a - ts * m.a;
        mt.b = mt.b - ts * m.b;
        mt.sigma = mt.sigma - ts * m.sigma;
        mt.rho = mt.rho - ts * m.rho;
        const SuperMatrix inv = mt.inverse();
        GrassmannElement val = (m3 * inv * inv * inv).str();
        return (1.0 - t) * (1.0 - t) * val;
    };
    GrassmannElement v_tint(n_gen);
    for (std::uint32_t mask = 0; mask < 4; ++mask)
        v_tint.set_coefficient(
            mask, integrate01_cd([&](double t) { return integrand(t).coefficient(mask); }));

    PotentialSuperResult r;
    r.body = v_super.body();
    r.err_tintegral = max_coeff_diff(v_super, v_tint);
    r.err_body = std::abs(r.body - (potential_v(cd(a, 0.0), s) - potential_v(cd(0.0, b), s)));
    r.err_soul = std::abs(v_super.coefficient(0b11) + d_term(a, b, s));
    r.err_linear = std::max(std::abs(v_super.coefficient(0b01)),
                            std::abs(v_super.coefficient(0b10)));
    return r;
}

// ------------------------------------------------------------------
// Fermionic sector of the dual weight

SusyRepResult susy_rep_check(const TorusLattice& lat, double energy, std::uint64_t seed) {
    const int n = lat.volume();
    const int n_gen = 2 * n;
    if (n_gen > 12)
        throw std::invalid_argument("susy_rep_check: volume too large for the symbolic engine");
    const CovOperator bcov = covariance(CovKind::B, lat, energy);
    const MatrixXcd b_dense = build_dense(bcov);
    const MatrixXcd k = b_dense.inverse();

    const GrassmannElement weight = (cd(-1.0, 0.0) * quadratic_form(k, n_gen)).exp();
    const std::vector<int> diffs = all_pair_differentials(n);
    const cd z = berezin_integrate(weight, diffs).body();

    SusyRepResult r;
    r.volume = n;
    r.norm_err = std::abs(z * std::pow(kTwoPi, n) * b_dense.determinant() - 1.0);

    // <rhobar_p rho_q> = -B_qp
    double moment_err = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            const GrassmannElement obs = GrassmannElement::generator(n_gen, bar_gen(p)) *
                                         GrassmannElement::generator(n_gen, ung_gen(q));
            const cd val = berezin_integrate(obs * weight, diffs).body() / z;
            moment_err = std::max(moment_err, std::abs(val + b_dense(q, p)));
        }
    r.moment_err = moment_err;

    // exp(sum_j c_j rho_j rhobar_j) integrates to det(1 + cB)
    auto rng = make_stream(seed, 0);
    std::normal_distribution<double> gauss(0.0, 0.6);
    double det_err = 0.0;
    for (int trial = 0; trial < 4; ++trial) {
        VectorXcd c(n);
        for (int j = 0; j < n; ++j) c[j] = cd(gauss(rng), gauss(rng));
        GrassmannElement ins(n_gen);
        for (int j = 0; j < n; ++j)
            ins += c[j] * (GrassmannElement::generator(n_gen, ung_gen(j)) *
                           GrassmannElement::generator(n_gen, bar_gen(j)));
        const cd lhs = berezin_integrate(ins.exp() * weight, diffs).body() / z;
        const MatrixXcd cb = c.asDiagonal() * b_dense;
        const cd rhs = (MatrixXcd::Identity(n, n) + cb).determinant();
        det_err = std::max(det_err, std::abs(lhs - rhs));
    }
    r.det_err = det_err;
    return r;
}

// ------------------------------------------------------------------
// integration by parts

namespace {

struct IbpTerm {
    cd coeff;
    std::vector<int> a_pow, b_pow;  // per-site exponents
    std::vector<int> ferm;          // generator sequence in written order
};
using IbpFunctional = std::vector<IbpTerm>;

class IbpEvaluator {
  public:
    IbpEvaluator(const MatrixXd& j_dense, int n_sites)
        : j_(j_dense),
          n_(n_sites),
          n_gen_(2 * n_sites),
          diffs_(all_pair_differentials(n_sites)),
          weight_((cd(-1.0, 0.0) * quadratic_form(j_dense.inverse().cast<cd>(), n_gen_)).exp()),
          z_(berezin_integrate(weight_, diffs_).body()) {}

    cd ferm_expect(const std::vector<int>& seq) {
        auto it = memo_.find(seq);
        if (it != memo_.end()) return it->second;
        GrassmannElement obs = GrassmannElement::scalar(n_gen_, cd(1.0, 0.0));
        for (int g : seq) obs = obs * GrassmannElement::generator(n_gen_, g);
        const cd val = berezin_integrate(obs * weight_, diffs_).body() / z_;
        memo_.emplace(seq, val);
        return val;
    }

    cd eval(const IbpFunctional& f) {
        cd total(0.0, 0.0);
        for (const IbpTerm& t : f) {
            std::vector<int> a_idx, b_idx;
            for (int s = 0; s < n_; ++s) {
                a_idx.insert(a_idx.end(), std::size_t(t.a_pow[std::size_t(s)]), s);
                b_idx.insert(b_idx.end(), std::size_t(t.b_pow[std::size_t(s)]), s);
            }
            total += t.coeff * wick_moment(j_, a_idx) * wick_moment(j_, b_idx) *
                     ferm_expect(t.ferm);
        }
        return total;
    }

  private:
    MatrixXd j_;
    int n_;
    int n_gen_;
    std::vector<int> diffs_;
    GrassmannElement weight_;
    cd z_;
    std::map<std::vector<int>, cd> memo_;
};

IbpFunctional multiply_site_var(const IbpFunctional& f, int site, bool is_a) {
    IbpFunctional out = f;
    for (IbpTerm& t : out) (is_a ? t.a_pow : t.b_pow)[std::size_t(site)] += 1;
    return out;
}

IbpFunctional derive_site_var(const IbpFunctional& f, int site, bool is_a) {
    IbpFunctional out;
    for (const IbpTerm& t : f) {
        const std::vector<int>& pow = is_a ? t.a_pow : t.b_pow;
        if (pow[std::size_t(site)] == 0) continue;
        IbpTerm d = t;
        d.coeff *= double(pow[std::size_t(site)]);
        (is_a ? d.a_pow : d.b_pow)[std::size_t(site)] -= 1;
        out.push_back(d);
    }
    return out;
}

}  // namespace

IbpReport ibp_check(const TorusLattice& lat, int j_site) {
    const int n = lat.volume();
    if (2 * n > 12)
        throw std::invalid_argument("ibp_check: volume too large for the symbolic engine");
    const CovOperator jcov = covariance(CovKind::J, lat);
    const MatrixXd j_dense = build_dense(jcov).real();
    IbpEvaluator ev(j_dense, n);

    const int p = lat.neighbor(j_site, 0);
    auto mono = [&](std::initializer_list<std::pair<int, bool>> bos,
                    std::initializer_list<int> ferm) {
        IbpTerm t;
        t.coeff = cd(1.0, 0.0);
        t.a_pow.assign(std::size_t(n), 0);
        t.b_pow.assign(std::size_t(n), 0);
        for (auto [site, is_a] : bos) (is_a ? t.a_pow : t.b_pow)[std::size_t(site)] += 1;
        t.ferm = ferm;
        return IbpFunctional{t};
    };

    std::vector<std::pair<std::string, IbpFunctional>> functionals;
    functionals.emplace_back("a_p^3", mono({{p, true}, {p, true}, {p, true}}, {}));
    functionals.emplace_back("b_p^3", mono({{p, false}, {p, false}, {p, false}}, {}));
    functionals.emplace_back("a_j a_p^2", mono({{j_site, true}, {p, true}, {p, true}}, {}));
    functionals.emplace_back("b_j b_p a_p", mono({{j_site, false}, {p, false}, {p, true}}, {}));
    functionals.emplace_back("a_p rhobar_p rho_p",
                             mono({{p, true}}, {bar_gen(p), ung_gen(p)}));
    functionals.emplace_back("a_p rhobar_j rho_p",
                             mono({{p, true}}, {bar_gen(j_site), ung_gen(p)}));
    functionals.emplace_back("a_j^2 a_p", mono({{j_site, true}, {j_site, true}, {p, true}}, {}));

    IbpReport report;
    double max_err = 0.0;
    double min_gap = 1e300;
    for (auto& [name, f] : functionals) {
        IbpFunctionalResult row;
        row.name = name;
        row.lhs = ev.eval(multiply_site_var(f, j_site, true)) -
                  cd(0.0, 1.0) * ev.eval(multiply_site_var(f, j_site, false));
        row.rhs_summed = cd(0.0, 0.0);
        for (int k = 0; k < n; ++k)
            row.rhs_summed += j_dense(k, j_site) * (ev.eval(derive_site_var(f, k, true)) -
                                                    cd(0.0, 1.0) * ev.eval(derive_site_var(f, k, false)));
        const cd pinned = ev.eval(derive_site_var(f, j_site, true)) -
                          cd(0.0, 1.0) * ev.eval(derive_site_var(f, j_site, false));
        row.rhs_pinned = j_dense.col(j_site).sum() * pinned;
        max_err = std::max(max_err, std::abs(row.lhs - row.rhs_summed));
        if (std::abs(row.rhs_summed - row.rhs_pinned) > 1e-6)
            min_gap = std::min(min_gap, std::abs(row.lhs - row.rhs_pinned));
        report.functionals.push_back(std::move(row));
    }
    report.max_err_summed = max_err;
    report.min_gap_pinned = (min_gap == 1e300) ? 0.0 : min_gap;
    report.decisive = max_err < 1e-10 && report.min_gap_pinned > 1e-3;
    return report;
}

// ------------------------------------------------------------------
// Hubbard-Stratonovich identity

namespace {

// E[H_ab H_cd] for the Hermitian band ensemble: J_ab when (c,d) = (b,a).
double h_pair_moment(const MatrixXd& j, std::pair<int, int> x, std::pair<int, int> y) {
    return (y.first == x.second && y.second == x.first) ? j(x.first, x.second) : 0.0;
}

double h_wick(const MatrixXd& j, const std::vector<std::pair<int, int>>& entries) {
    if (entries.empty()) return 1.0;
    if (entries.size() % 2 != 0) return 0.0;
    double total = 0.0;
    for (std::size_t k = 1; k < entries.size(); ++k) {
        const double pair_val = h_pair_moment(j, entries[0], entries[k]);
        if (pair_val == 0.0) continue;
        std::vector<std::pair<int, int>> rest;
        for (std::size_t r = 1; r < entries.size(); ++r)
            if (r != k) rest.push_back(entries[r]);
        total += pair_val * h_wick(j, rest);
    }
    return total;
}

}  // namespace

HsIdentityResult hs_identity_check(long n_samples, std::uint64_t seed) {
    HsIdentityResult res;

    // one site, J_00 = 1: quadrature over the real Gaussian entry
    {
        using boost::math::quadrature::gauss_kronrod;
        const double inv_sqrt2pi = 1.0 / std::sqrt(kTwoPi);
        for (cd z : {cd(0.8, 0.3), cd(1.1, -0.5)}) {
            const double z2 = std::norm(z);
            auto dens = [&](double h) { return inv_sqrt2pi * std::exp(-0.5 * h * h); };
            const double re = gauss_kronrod<double, 61>::integrate(
                [&](double h) { return dens(h) * std::cos(h * z2); }, -12.0, 12.0, 12, 1e-14);
            const double im = gauss_kronrod<double, 61>::integrate(
                [&](double h) { return -dens(h) * std::sin(h * z2); }, -12.0, 12.0, 12, 1e-14);
            const cd rhs = std::exp(cd(-0.5 * z2 * z2, 0.0));
            res.analytic_err = std::max(res.analytic_err, std::abs(cd(re, im) - rhs));
        }
    }

    const TorusLattice lat(2, 1);
    const int n = lat.volume();
    const CovOperator jcov = covariance(CovKind::J, lat);
    const MatrixXd j_dense = build_dense(jcov).real();

    // Grassmann variant, termwise: expand E[exp(-i (chibar, H chi))] with
    // Wick pairings of the matrix entries and compare with the closed form
    // exp(-1/2 sum_ij J_ij chibar_i chi_j chibar_j chi_i).
    {
        const int n_gen = 2 * n;
        GrassmannElement lhs = GrassmannElement::scalar(n_gen, cd(1.0, 0.0));
        std::vector<std::pair<int, int>> entries;
        std::vector<GrassmannElement> pair_elems;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                pair_elems.push_back(GrassmannElement::generator(n_gen, bar_gen(i)) *
                                     GrassmannElement::generator(n_gen, ung_gen(j)));
        const int n_pairs = n * n;
        auto pair_of = [&](int flat) { return std::make_pair(flat / n, flat % n); };
        double factorial = 1.0;
        std::vector<int> tuple;
        for (int k = 2; k <= 4; k += 2) {
            factorial = 1.0;
            for (int r = 2; r <= k; ++r) factorial *= double(r);
            const cd prefactor = std::pow(cd(0.0, -1.0), k) / factorial;
            tuple.assign(std::size_t(k), 0);
            for (;;) {
                entries.clear();
                for (int r = 0; r < k; ++r) entries.push_back(pair_of(tuple[std::size_t(r)]));
                const double w = h_wick(j_dense, entries);
                if (w != 0.0) {
                    GrassmannElement prod = pair_elems[std::size_t(tuple[0])];
                    for (int r = 1; r < k; ++r)
                        prod = prod * pair_elems[std::size_t(tuple[std::size_t(r)])];
                    lhs += (prefactor * w) * prod;
                }
                int pos = k - 1;
                while (pos >= 0 && tuple[std::size_t(pos)] == n_pairs - 1) --pos;
                if (pos < 0) break;
                ++tuple[std::size_t(pos)];
                for (int r = pos + 1; r < k; ++r) tuple[std::size_t(r)] = 0;
            }
        }
        GrassmannElement q(n_gen);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                q += j_dense(i, j) *
                     (pair_elems[std::size_t(i * n + j)] * pair_elems[std::size_t(j * n + i)]);
        const GrassmannElement rhs = (cd(-0.5, 0.0) * q).exp();
        res.grassmann_err = max_coeff_diff(lhs, rhs);
    }

    // L = 2 Bosonic case by Monte Carlo
    {
        VectorXcd z(n);
        for (int k = 0; k < n; ++k) z[k] = cd(0.5 + 0.1 * k, 0.2 - 0.05 * k);
        const VectorXd jp = jcov.profile.real();
        BatchAccumulator acc(std::max<long>(n_samples, 1));
        auto rng = make_stream(seed, 0);
        for (long i = 0; i < n_samples; ++i) {
            const MatrixXcd h = sample_band_matrix(lat, jp, rng);
            const cd phase = z.dot(h * z);
            acc.add(i, std::exp(cd(0.0, -1.0) * phase));
        }
        const MCEstimate est = acc.estimate();
        double expo = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) expo += j_dense(i, j) * std::norm(z[i]) * std::norm(z[j]);
        res.mc_value = est.mean;
        res.mc_rhs = cd(std::exp(-0.5 * expo), 0.0);
        res.mc_samples = est.n_samples;
        const double dre = std::abs(est.mean.real() - res.mc_rhs.real());
        const double dim = std::abs(est.mean.imag() - res.mc_rhs.imag());
        res.mc_sigma = std::max(est.se_re > 0.0 ? dre / est.se_re : 0.0,
                                est.se_im > 0.0 ? dim / est.se_im : 0.0);
    }
    return res;
}

}  // namespace rbmlab

#include "rbmlab/grassmann.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace rbmlab {

namespace {

using cd = std::complex<double>;

// Sign from interleaving the ascending products of masks a and b into one
// ascending product of a|b: each generator of b crosses every generator of a
// with a larger index.
int merge_sign(std::uint32_t a, std::uint32_t b) {
    int crossings = 0;
    while (b != 0) {
        int i = std::countr_zero(b);
        crossings += std::popcount(a >> (i + 1));
        b &= b - 1;
    }
    return (crossings & 1) ? -1 : 1;
}

}  // namespace

GrassmannElement::GrassmannElement(int n_gen) : n_gen_(n_gen) {
    if (n_gen < 0 || n_gen > kMaxGenerators)
        throw std::invalid_argument("GrassmannElement: generator count out of range");
    coeff_.assign(std::size_t(1) << n_gen, cd(0.0, 0.0));
}

GrassmannElement GrassmannElement::scalar(int n_gen, cd c) {
    GrassmannElement e(n_gen);
    e.coeff_[0] = c;
    return e;
}

GrassmannElement GrassmannElement::generator(int n_gen, int i) {
    if (i < 0 || i >= n_gen) throw std::invalid_argument("GrassmannElement: bad generator index");
    GrassmannElement e(n_gen);
    e.coeff_[std::size_t(1) << i] = cd(1.0, 0.0);
    return e;
}

GrassmannElement GrassmannElement::soul() const {
    GrassmannElement s = *this;
    s.coeff_[0] = cd(0.0, 0.0);
    return s;
}

bool GrassmannElement::is_even() const {
    for (std::size_t m = 0; m < coeff_.size(); ++m)
        if (coeff_[m] != cd(0.0, 0.0) && (std::popcount(std::uint32_t(m)) & 1)) return false;
    return true;
}

bool GrassmannElement::is_odd() const {
    for (std::size_t m = 0; m < coeff_.size(); ++m)
        if (coeff_[m] != cd(0.0, 0.0) && !(std::popcount(std::uint32_t(m)) & 1)) return false;
    return true;
}

bool GrassmannElement::is_zero(double tol) const {
    for (const cd& c : coeff_)
        if (std::abs(c) > tol) return false;
    return true;
}

double GrassmannElement::max_abs_coeff() const {
    double m = 0.0;
    for (const cd& c : coeff_) m = std::max(m, std::abs(c));
    return m;
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& o) {
    if (o.n_gen_ != n_gen_) throw std::invalid_argument("GrassmannElement: mixed algebras");
    for (std::size_t m = 0; m < coeff_.size(); ++m) coeff_[m] += o.coeff_[m];
    return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& o) {
    if (o.n_gen_ != n_gen_) throw std::invalid_argument("GrassmannElement: mixed algebras");
    for (std::size_t m = 0; m < coeff_.size(); ++m) coeff_[m] -= o.coeff_[m];
    return *this;
}

GrassmannElement& GrassmannElement::operator*=(cd c) {
    for (cd& v : coeff_) v *= c;
    return *this;
}

GrassmannElement GrassmannElement::operator*(const GrassmannElement& o) const {
    if (o.n_gen_ != n_gen_) throw std::invalid_argument("GrassmannElement: mixed algebras");
    std::vector<std::uint32_t> ma, mb;
    for (std::size_t m = 0; m < coeff_.size(); ++m)
        if (coeff_[m] != cd(0.0, 0.0)) ma.push_back(std::uint32_t(m));
    for (std::size_t m = 0; m < o.coeff_.size(); ++m)
        if (o.coeff_[m] != cd(0.0, 0.0)) mb.push_back(std::uint32_t(m));

    GrassmannElement out(n_gen_);
    for (std::uint32_t a : ma) {
        const cd ca = coeff_[a];
        for (std::uint32_t b : mb) {
            if ((a & b) != 0) continue;  // repeated generator squares to zero
            out.coeff_[a | b] += double(merge_sign(a, b)) * ca * o.coeff_[b];
        }
    }
    return out;
}

GrassmannElement GrassmannElement::exp() const {
    const GrassmannElement s = soul();
    GrassmannElement sum = scalar(n_gen_, cd(1.0, 0.0));
    GrassmannElement power = sum;
    double factorial = 1.0;
    for (int k = 1; k <= n_gen_; ++k) {
        power = power * s;
        if (power.is_zero()) break;
        factorial *= double(k);
        sum += (cd(1.0, 0.0) / factorial) * power;
    }
    return std::exp(body()) * sum;
}

GrassmannElement GrassmannElement::log() const {
    const cd b = body();
    if (b == cd(0.0, 0.0)) throw std::domain_error("GrassmannElement::log: zero body");
    const GrassmannElement u = (cd(1.0, 0.0) / b) * soul();
    GrassmannElement sum = scalar(n_gen_, std::log(b));
    GrassmannElement power = scalar(n_gen_, cd(1.0, 0.0));
    for (int k = 1; k <= n_gen_; ++k) {
        power = power * u;
        if (power.is_zero()) break;
        const double sign = (k & 1) ? 1.0 : -1.0;
        sum += (sign / double(k)) * power;
    }
    return sum;
}

GrassmannElement GrassmannElement::inverse() const {
    const cd b = body();
    if (b == cd(0.0, 0.0)) throw std::domain_error("GrassmannElement::inverse: zero body");
    const GrassmannElement u = (cd(-1.0, 0.0) / b) * soul();
    GrassmannElement sum = scalar(n_gen_, cd(1.0, 0.0));
    GrassmannElement power = sum;
    for (int k = 1; k <= n_gen_; ++k) {
        power = power * u;
        if (power.is_zero()) break;
        sum += power;
    }
    return (cd(1.0, 0.0) / b) * sum;
}

GrassmannElement berezin_integrate_one(const GrassmannElement& f, int i, BerezinNorm norm) {
    if (i < 0 || i >= f.n_generators())
        throw std::invalid_argument("berezin_integrate_one: bad generator index");
    const double unit =
        norm == BerezinNorm::SqrtTwoPi ? 1.0 / std::sqrt(2.0 * 3.14159265358979323846) : 1.0;
    const std::uint32_t bit = std::uint32_t(1) << i;
    const std::uint32_t below = bit - 1;
    GrassmannElement out(f.n_generators());
    const std::size_t n = std::size_t(1) << f.n_generators();
    for (std::size_t m = 0; m < n; ++m) {
        if (!(m & bit)) continue;
        const std::complex<double> c = f.coefficient(std::uint32_t(m));
        if (c == std::complex<double>(0.0, 0.0)) continue;
        // Move the generator to the front across the lower-index ones.
        const int sign = (std::popcount(std::uint32_t(m) & below) & 1) ? -1 : 1;
        out.set_coefficient(std::uint32_t(m) ^ bit,
                            out.coefficient(std::uint32_t(m) ^ bit) + double(sign) * unit * c);
    }
    return out;
}

GrassmannElement berezin_integrate(const GrassmannElement& f, const std::vector<int>& differentials,
                                   BerezinNorm norm) {
    GrassmannElement out = f;
    for (auto it = differentials.rbegin(); it != differentials.rend(); ++it)
        out = berezin_integrate_one(out, *it, norm);
    return out;
}

}  // namespace rbmlab

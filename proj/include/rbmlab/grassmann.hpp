#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace rbmlab {

// Element of the Grassmann algebra on n_gen anticommuting generators, stored
// as 2^n_gen complex coefficients.  The coefficient at bitmask S multiplies
// the product of the generators in S taken in ascending index order.
class GrassmannElement {
  public:
    static constexpr int kMaxGenerators = 20;

    explicit GrassmannElement(int n_gen);
    static GrassmannElement scalar(int n_gen, std::complex<double> c);
    static GrassmannElement generator(int n_gen, int i);

    int n_generators() const { return n_gen_; }
    std::complex<double> coefficient(std::uint32_t mask) const { return coeff_[mask]; }
    void set_coefficient(std::uint32_t mask, std::complex<double> c) { coeff_[mask] = c; }

    // Scalar part (coefficient of the empty monomial) and its complement.
    std::complex<double> body() const { return coeff_[0]; }
    GrassmannElement soul() const;

    bool is_even() const;   // all monomials of even degree
    bool is_odd() const;    // all monomials of odd degree
    bool is_zero(double tol = 0.0) const;
    double max_abs_coeff() const;

    GrassmannElement& operator+=(const GrassmannElement& o);
    GrassmannElement& operator-=(const GrassmannElement& o);
    GrassmannElement& operator*=(std::complex<double> c);

    friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) {
        return a += b;
    }
    friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) {
        return a -= b;
    }
    friend GrassmannElement operator*(std::complex<double> c, GrassmannElement a) {
        return a *= c;
    }
    friend GrassmannElement operator*(GrassmannElement a, std::complex<double> c) {
        return a *= c;
    }

    // Grassmann product with the crossing-parity sign.
    GrassmannElement operator*(const GrassmannElement& o) const;

    // exp(x) = e^body sum_k soul^k / k!; the soul is nilpotent, so the sum is
    // finite.  Valid for every element since powers of one element commute.
    GrassmannElement exp() const;
    // log and inverse need a nonzero body.
    GrassmannElement log() const;
    GrassmannElement inverse() const;

  private:
    int n_gen_;
    std::vector<std::complex<double>> coeff_;
};

enum class BerezinNorm {
    SqrtTwoPi,  // int da a = 1/sqrt(2 pi)
    Unit,       // int da a = 1
};

// Integrate over one generator: terms lacking it vanish; in the others the
// generator moves to the front, picking up one sign per crossed generator.
GrassmannElement berezin_integrate_one(const GrassmannElement& f, int i,
                                       BerezinNorm norm = BerezinNorm::SqrtTwoPi);

// Iterated integral with differentials listed left to right as written, so
// the rightmost one acts first.
GrassmannElement berezin_integrate(const GrassmannElement& f, const std::vector<int>& differentials,
                                   BerezinNorm norm = BerezinNorm::SqrtTwoPi);

}  // namespace rbmlab

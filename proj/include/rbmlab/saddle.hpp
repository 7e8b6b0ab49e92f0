#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace rbmlab {

// Saddle-point data of the dual representation at real energy E, |E| < 2.
// calE = E/2 - i sqrt(1 - E^2/4) solves calE * (E - calE) = 1.
struct SaddleData {
    double E = 0.0;
    std::complex<double> calE;       // er - i*ei
    std::complex<double> calE_bar;   // E - calE = conj(calE)
    double er = 0.0;                 // Re calE = E/2
    double ei = 0.0;                 // -Im calE = sqrt(1 - E^2/4) >= 0
    double mr2 = 0.0;                // 2 (1 - E^2/4)
    double mi2 = 0.0;                // |E| sqrt(1 - E^2/4)
    int sigma_e = 1;                 // sign(E), +1 at E = 0
    std::complex<double> a_plus;     // saddle a_s+ = calE
    std::complex<double> a_minus;    // a_s- = conj(calE)
    std::complex<double> b_plus;     // b_s+ = -i er - ei
    std::complex<double> b_minus;    // b_s- = -i er + ei
    double rho_sc = 0.0;             // semicircle density at E
};

inline double semicircle_density(double E) {
    double t = 1.0 - E * E / 4.0;
    return t > 0.0 ? std::sqrt(t) / M_PI : 0.0;
}

// Semicircle density seen through a Lorentzian of width eps: the imaginary
// part of the Stieltjes transform s(z) = (z - sqrt(z^2 - 4)) / 2 at z = E +
// i eps, branch fixed by s(z) -> 1/z at infinity.  This is the exact large-
// volume limit of the eps-broadened DOS, so finite-(W, L) deviations can be
// read off without the common O(eps) broadening bias.
inline double broadened_semicircle_density(double E, double eps) {
    if (!(eps > 0.0))
        throw std::invalid_argument("broadened_semicircle_density: eps must be > 0");
    std::complex<double> z(E, eps);
    std::complex<double> sq = std::sqrt(z * z - 4.0);
    if (z.real() * sq.real() + z.imag() * sq.imag() < 0.0) sq = -sq;  // align with z
    std::complex<double> s = 2.0 / (z + sq);
    return s.imag() / -M_PI;
}

inline SaddleData saddle_data(double E) {
    if (!(std::abs(E) < 2.0))
        throw std::domain_error("saddle_data: |E| must be < 2");
    SaddleData s;
    s.E = E;
    s.er = E / 2.0;
    s.ei = std::sqrt(1.0 - E * E / 4.0);
    s.calE = {s.er, -s.ei};
    s.calE_bar = {s.er, s.ei};
    s.mr2 = 2.0 * (1.0 - E * E / 4.0);
    s.mi2 = std::abs(E) * s.ei;
    s.sigma_e = E < 0.0 ? -1 : 1;
    s.a_plus = s.calE;
    s.a_minus = s.calE_bar;
    s.b_plus = {-s.ei, -s.er};
    s.b_minus = {s.ei, -s.er};
    s.rho_sc = s.ei / M_PI;
    return s;
}

}  // namespace rbmlab

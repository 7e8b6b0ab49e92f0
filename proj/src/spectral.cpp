#include "rbmlab/spectral.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

#include "rbmlab/linalg.hpp"

namespace rbmlab {

namespace {
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft2D::Fft2D(int L) : L_(L) {
    if (L < 1) throw std::invalid_argument("Fft2D: L must be >= 1");
    std::lock_guard<std::mutex> lock(fftw_mutex());
    buf_in_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * size_t(L) * L));
    buf_out_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * size_t(L) * L));
    if (!buf_in_ || !buf_out_) throw std::bad_alloc();
    // FFTW's first dimension is the slow one; our slow coordinate is y.
    plan_ = fftw_plan_dft_2d(L, L, reinterpret_cast<fftw_complex*>(buf_in_),
                             reinterpret_cast<fftw_complex*>(buf_out_),
                             FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan_) throw std::runtime_error("Fft2D: plan creation failed");
}

Fft2D::~Fft2D() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    if (plan_) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    if (buf_in_) fftw_free(buf_in_);
    if (buf_out_) fftw_free(buf_out_);
}

void Fft2D::backward(const std::complex<double>* in, std::complex<double>* out) {
    const size_t n = size_t(L_) * L_;
    for (size_t i = 0; i < n; ++i) buf_in_[i] = in[i];
    fftw_execute(static_cast<fftw_plan>(plan_));
    for (size_t i = 0; i < n; ++i) out[i] = buf_out_[i];
}

SpectralFieldSampler::SpectralFieldSampler(int L, const Eigen::ArrayXd& multipliers)
    : L_(L), fft_(L) {
    const int n = L * L;
    if (int(multipliers.size()) != n)
        throw std::invalid_argument("SpectralFieldSampler: multiplier size mismatch");
    if (multipliers.minCoeff() < 0.0)
        throw std::invalid_argument("SpectralFieldSampler: negative multiplier");
    amp_ = (multipliers * double(n)).sqrt();
    partner_.resize(size_t(n));
    for (int ny = 0; ny < L; ++ny)
        for (int nx = 0; nx < L; ++nx) {
            int k = nx + L * ny;
            int px = (L - nx) % L;
            int py = (L - ny) % L;
            partner_[size_t(k)] = px + L * py;
            if (multipliers[k] != multipliers[partner_[size_t(k)]])
                throw std::invalid_argument("SpectralFieldSampler: multipliers must be inversion-symmetric");
        }
    work_.resize(size_t(n));
    field_.resize(size_t(n));
}

void SpectralFieldSampler::draw(std::mt19937_64& rng, Eigen::VectorXd& out) {
    const int n = L_ * L_;
    std::normal_distribution<double> nd;
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < n; ++k) {
        int p = partner_[size_t(k)];
        if (k == p) {
            work_[size_t(k)] = amp_[k] * nd(rng);
        } else if (k < p) {
            std::complex<double> c(nd(rng) * inv_sqrt2, nd(rng) * inv_sqrt2);
            work_[size_t(k)] = amp_[k] * c;
            work_[size_t(p)] = amp_[p] * std::conj(c);
        }
    }
    fft_.backward(work_.data(), field_.data());
    out.resize(n);
    const double inv_n = 1.0 / double(n);
    for (int i = 0; i < n; ++i) out[i] = field_[size_t(i)].real() * inv_n;
}

DenseFieldSampler::DenseFieldSampler(const Eigen::MatrixXd& C) : sqrt_(linalg::spd_sqrt(C)) {}

void DenseFieldSampler::draw(std::mt19937_64& rng, Eigen::VectorXd& out) {
    const int n = int(sqrt_.rows());
    std::normal_distribution<double> nd;
    xi_.resize(n);
    for (int i = 0; i < n; ++i) xi_[i] = nd(rng);
    out = sqrt_ * xi_;
}

}  // namespace rbmlab

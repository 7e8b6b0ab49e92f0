#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace rbmlab {

// Thin FFTW wrapper for L x L complex transforms over arrays indexed
// x + L*y. backward() computes unnormalized sums over e^{+i k.j}.
class Fft2D {
public:
    explicit Fft2D(int L);
    ~Fft2D();
    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    void backward(const std::complex<double>* in, std::complex<double>* out);
    int side() const { return L_; }

private:
    int L_;
    void* plan_ = nullptr;
    std::complex<double>* buf_in_ = nullptr;
    std::complex<double>* buf_out_ = nullptr;
};

// Samples centered real Gaussian fields whose covariance has the given
// (nonnegative, inversion-symmetric) Fourier multipliers. Exact for
// translation-invariant covariances; one FFT per draw.
class SpectralFieldSampler {
public:
    SpectralFieldSampler(int L, const Eigen::ArrayXd& multipliers);

    void draw(std::mt19937_64& rng, Eigen::VectorXd& out);
    int volume() const { return L_ * L_; }

private:
    int L_;
    Eigen::ArrayXd amp_;            // sqrt(N * multiplier)
    std::vector<int> partner_;      // index of -k for each mode k
    Fft2D fft_;
    std::vector<std::complex<double>> work_, field_;
};

// Dense fallback: x = C^{1/2} xi with a symmetric square root.
class DenseFieldSampler {
public:
    explicit DenseFieldSampler(const Eigen::MatrixXd& C);
    void draw(std::mt19937_64& rng, Eigen::VectorXd& out);
    int volume() const { return int(sqrt_.rows()); }

private:
    Eigen::MatrixXd sqrt_;
    Eigen::VectorXd xi_;
};

}  // namespace rbmlab

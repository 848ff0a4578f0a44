#pragma once
// Real FFT helpers and zero-padded linear convolution on top of FFTW.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace wrt::fft {

std::size_t next_pow2(std::size_t n);

// Forward real transform of `x`, zero padded to `n` (n >= x.size()); returns
// the n/2 + 1 non-redundant bins.
std::vector<std::complex<double>> forward(std::span<const double> x, std::size_t n);

// Inverse of `forward`, including the 1/n normalization.
std::vector<double> inverse(std::span<const std::complex<double>> spectrum, std::size_t n);

// Linear (non-circular) convolution with a two-sided kernel. The input signal
// x (length T) is transformed once; kernels k of length K hold lags
// -K/2 ... K/2-1, and
//     out[t] = sum_j k[j] * x[t - (j - K/2)],  t in [0, T),
// with x treated as zero outside [0, T). The transform length is the next
// power of two >= T + K - 1 so no wrap-around reaches the output window.
//
// Methods are const and allocate their own scratch, so one convolver may be
// shared between threads.
class LinearConvolver {
public:
    LinearConvolver(std::span<const double> x, std::size_t kernel_length);
    ~LinearConvolver();
    LinearConvolver(LinearConvolver&&) noexcept;
    LinearConvolver& operator=(LinearConvolver&&) noexcept;

    std::size_t signal_length() const noexcept;
    std::size_t kernel_length() const noexcept;
    std::size_t transform_length() const noexcept;

    // X k
    void convolve(std::span<const double> k, std::span<double> out) const;
    std::vector<double> convolve(std::span<const double> k) const;

    // X^T v: out[j] = sum_t x[t - (j - K/2)] * v[t]
    void correlate(std::span<const double> v, std::span<double> out) const;
    std::vector<double> correlate(std::span<const double> v) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace wrt::fft

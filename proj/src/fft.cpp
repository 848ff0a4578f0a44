#include "wrt/fft.hpp"

#include "wrt/error.hpp"
#include "wrt/simd.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <map>
#include <mutex>

namespace wrt::fft {
namespace {

template <typename T>
struct FftwFree {
    void operator()(T* p) const noexcept { fftw_free(p); }
};

template <typename T>
using Buffer = std::unique_ptr<T[], FftwFree<T>>;

Buffer<double> real_buffer(std::size_t n) {
    auto* p = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    if (p == nullptr) throw std::bad_alloc();
    return Buffer<double>(p);
}

Buffer<fftw_complex> complex_buffer(std::size_t n) {
    auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (p == nullptr) throw std::bad_alloc();
    return Buffer<fftw_complex>(p);
}

struct Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

// FFTW's planner is not reentrant; executing an existing plan on new arrays is.
// Plans live for the lifetime of the process.
const Plans& plans_for(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, Plans> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto in = real_buffer(n);
    auto spec = complex_buffer(n / 2 + 1);
    Plans p;
    const int len = static_cast<int>(n);
    p.r2c = fftw_plan_dft_r2c_1d(len, in.get(), spec.get(), FFTW_ESTIMATE);
    p.c2r = fftw_plan_dft_c2r_1d(len, spec.get(), in.get(), FFTW_ESTIMATE);
    if (p.r2c == nullptr || p.c2r == nullptr) throw NumericalFailure("FFTW planning failed");
    return cache.emplace(n, p).first->second;
}

std::span<double> as_doubles(fftw_complex* c, std::size_t n_complex) {
    return {reinterpret_cast<double*>(c), 2 * n_complex};
}

} // namespace

std::size_t next_pow2(std::size_t n) { return n <= 1 ? 1 : std::bit_ceil(n); }

std::vector<std::complex<double>> forward(std::span<const double> x, std::size_t n) {
    if (n < x.size() || n == 0) throw InvalidArgument("fft::forward: transform length too short");
    const Plans& p = plans_for(n);
    auto in = real_buffer(n);
    std::copy(x.begin(), x.end(), in.get());
    std::fill(in.get() + x.size(), in.get() + n, 0.0);
    auto spec = complex_buffer(n / 2 + 1);
    fftw_execute_dft_r2c(p.r2c, in.get(), spec.get());
    std::vector<std::complex<double>> out(n / 2 + 1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {spec[i][0], spec[i][1]};
    return out;
}

std::vector<double> inverse(std::span<const std::complex<double>> spectrum, std::size_t n) {
    if (spectrum.size() != n / 2 + 1) throw InvalidArgument("fft::inverse: spectrum size mismatch");
    const Plans& p = plans_for(n);
    auto spec = complex_buffer(n / 2 + 1);
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        spec[i][0] = spectrum[i].real();
        spec[i][1] = spectrum[i].imag();
    }
    auto out = real_buffer(n);
    fftw_execute_dft_c2r(p.c2r, spec.get(), out.get());
    std::vector<double> result(out.get(), out.get() + n);
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : result) v *= scale;
    return result;
}

struct LinearConvolver::Impl {
    std::size_t T = 0;
    std::size_t K = 0;
    std::size_t N = 0;
    const Plans* plans = nullptr;
    Buffer<fftw_complex> x_hat;

    std::size_t bins() const { return N / 2 + 1; }
};

LinearConvolver::LinearConvolver(std::span<const double> x, std::size_t kernel_length)
    : impl_(std::make_unique<Impl>()) {
    if (x.empty()) throw InvalidArgument("convolve: empty input signal");
    if (kernel_length < 2 || kernel_length % 2 != 0)
        throw InvalidArgument("convolve: kernel length must be even and >= 2");
    impl_->T = x.size();
    impl_->K = kernel_length;
    impl_->N = next_pow2(x.size() + kernel_length - 1);
    impl_->plans = &plans_for(impl_->N);
    auto in = real_buffer(impl_->N);
    std::copy(x.begin(), x.end(), in.get());
    std::fill(in.get() + x.size(), in.get() + impl_->N, 0.0);
    impl_->x_hat = complex_buffer(impl_->bins());
    fftw_execute_dft_r2c(impl_->plans->r2c, in.get(), impl_->x_hat.get());
}

LinearConvolver::~LinearConvolver() = default;
LinearConvolver::LinearConvolver(LinearConvolver&&) noexcept = default;
LinearConvolver& LinearConvolver::operator=(LinearConvolver&&) noexcept = default;

std::size_t LinearConvolver::signal_length() const noexcept { return impl_->T; }
std::size_t LinearConvolver::kernel_length() const noexcept { return impl_->K; }
std::size_t LinearConvolver::transform_length() const noexcept { return impl_->N; }

void LinearConvolver::convolve(std::span<const double> k, std::span<double> out) const {
    const Impl& s = *impl_;
    if (k.size() != s.K) throw InvalidArgument("convolve: kernel length mismatch");
    if (out.size() != s.T) throw InvalidArgument("convolve: output length mismatch");
    auto buf = real_buffer(s.N);
    std::copy(k.begin(), k.end(), buf.get());
    std::fill(buf.get() + s.K, buf.get() + s.N, 0.0);
    auto spec = complex_buffer(s.bins());
    fftw_execute_dft_r2c(s.plans->r2c, buf.get(), spec.get());
    auto sd = as_doubles(spec.get(), s.bins());
    simd::complex_multiply(as_doubles(s.x_hat.get(), s.bins()), sd, sd);
    fftw_execute_dft_c2r(s.plans->c2r, spec.get(), buf.get());
    // full[n] = sum_j k[j] x[n - j]; the lag-aligned window starts at n = K/2.
    const double scale = 1.0 / static_cast<double>(s.N);
    const double* full = buf.get() + s.K / 2;
    for (std::size_t t = 0; t < s.T; ++t) out[t] = full[t] * scale;
}

std::vector<double> LinearConvolver::convolve(std::span<const double> k) const {
    std::vector<double> out(impl_->T);
    convolve(k, out);
    return out;
}

void LinearConvolver::correlate(std::span<const double> v, std::span<double> out) const {
    const Impl& s = *impl_;
    if (v.size() != s.T) throw InvalidArgument("correlate: signal length mismatch");
    if (out.size() != s.K) throw InvalidArgument("correlate: output length mismatch");
    auto buf = real_buffer(s.N);
    std::copy(v.begin(), v.end(), buf.get());
    std::fill(buf.get() + s.T, buf.get() + s.N, 0.0);
    auto spec = complex_buffer(s.bins());
    fftw_execute_dft_r2c(s.plans->r2c, buf.get(), spec.get());
    auto sd = as_doubles(spec.get(), s.bins());
    simd::complex_multiply_conj(as_doubles(s.x_hat.get(), s.bins()), sd, sd);
    fftw_execute_dft_c2r(s.plans->c2r, spec.get(), buf.get());
    // circ[m] = sum_s x[s] v[s + m]; lag m = j - K/2 may be negative.
    const double scale = 1.0 / static_cast<double>(s.N);
    const auto half = static_cast<std::ptrdiff_t>(s.K / 2);
    const auto N = static_cast<std::ptrdiff_t>(s.N);
    for (std::size_t j = 0; j < s.K; ++j) {
        std::ptrdiff_t m = static_cast<std::ptrdiff_t>(j) - half;
        if (m < 0) m += N;
        out[j] = buf[static_cast<std::size_t>(m)] * scale;
    }
}

std::vector<double> LinearConvolver::correlate(std::span<const double> v) const {
    std::vector<double> out(impl_->K);
    correlate(v, out);
    return out;
}

} // namespace wrt::fft
